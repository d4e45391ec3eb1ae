#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimedial/term.hpp"

namespace trimedial {

using Element = int;

// Tables are capped so that subsets and row/column masks fit one word.
inline constexpr int kMaxOrder = 64;

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite groupoid on 0..n-1; entry(i, j) = i*j.
class CayleyTable {
 public:
  // Row-major entries, n*n of them, each in 0..n-1.
  CayleyTable(int order, std::vector<std::uint8_t> entries);

  int order() const { return order_; }
  Element entry(Element i, Element j) const {
    return entries_[static_cast<std::size_t>(i * order_ + j)];
  }
  std::span<const std::uint8_t> entries() const { return entries_; }

  friend bool operator==(const CayleyTable&, const CayleyTable&) = default;
  friend auto operator<=>(const CayleyTable& a, const CayleyTable& b) {
    if (auto c = a.order_ <=> b.order_; c != 0) return c;
    return a.entries_ <=> b.entries_;
  }

 private:
  friend class TableBuilder;
  CayleyTable() = default;

  int order_ = 0;
  std::vector<std::uint8_t> entries_;
};

// Mutable scratch table for enumerators; hands out a const view.
class TableBuilder {
 public:
  explicit TableBuilder(int order);

  int order() const { return table_.order_; }
  void set(int i, int j, std::uint8_t v) {
    table_.entries_[static_cast<std::size_t>(i * table_.order_ + j)] = v;
  }
  std::uint8_t get(int i, int j) const {
    return table_.entries_[static_cast<std::size_t>(i * table_.order_ + j)];
  }
  const CayleyTable& view() const { return table_; }

 private:
  CayleyTable table_;
};

// "n\n" followed by n rows of n space-separated entries.
CayleyTable load_table(std::string_view text);
// Inverse of load_table: single spaces, every row newline-terminated.
std::string render_table(const CayleyTable& t);

// Table of the groupoid obtained by renaming every element e to perm[e].
CayleyTable relabel(const CayleyTable& t, std::span<const int> perm);

using Assignment = std::map<char, Element>;

class UnassignedVariable : public std::runtime_error {
 public:
  explicit UnassignedVariable(char name);
  char name() const { return name_; }

 private:
  char name_;
};

Element evaluate(const CayleyTable& t, const Term& term, const Assignment& a);

struct Counterexample {
  Assignment assignment;
  Element lhs = 0;
  Element rhs = 0;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

// "w=0 x=0 y=1 z=0 lhs=3 rhs=0"
std::string render(const Counterexample& c);

// An identity flattened for repeated checking. Variables are ordered by
// name, the first being the most significant digit of the assignment
// odometer; each step re-evaluates only the subterms that depend on a
// variable that changed.
class IdentityChecker {
 public:
  explicit IdentityChecker(const Identity& id);

  // Lexicographically least counterexample with every variable ranging over
  // the whole carrier, or nullopt when the identity holds.
  std::optional<Counterexample> check(const CayleyTable& t) const;
  // Same, but variables range over `domain` (ascending, in range) only.
  std::optional<Counterexample> check_on(const CayleyTable& t,
                                         std::span<const Element> domain) const;
  bool holds(const CayleyTable& t) const { return !check(t).has_value(); }
  // True when some assignment evaluates both sides using only rows
  // 0..known_rows-1 of `t` and they differ, so no completion of those rows
  // can satisfy the identity.
  bool refuted_by_rows(const CayleyTable& t, int known_rows) const;

  const std::vector<char>& vars() const { return vars_; }

 private:
  struct Node {
    int var = -1;  // variable index for leaves
    int left = -1;
    int right = -1;
  };
  int compile(const Term& t, std::vector<int>& level);

  std::vector<char> vars_;
  std::vector<Node> nodes_;  // post-order, children before parents
  int lhs_root_ = -1;
  int rhs_root_ = -1;
  // refresh_[j]: nodes to recompute once variable j (and everything after
  // it) changed, in post-order.
  std::vector<std::vector<int>> refresh_;
};

std::optional<Counterexample> check_identity(const CayleyTable& t,
                                             const Identity& id);

struct CancellationProfile {
  bool left_cancellative = false;
  bool right_cancellative = false;
  bool quasigroup = false;

  friend bool operator==(const CancellationProfile&,
                         const CancellationProfile&) = default;
};

CancellationProfile cancellation_profile(const CayleyTable& t);

}  // namespace trimedial
