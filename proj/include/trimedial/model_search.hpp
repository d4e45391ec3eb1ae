#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimedial/magma.hpp"

namespace trimedial {

enum class Structure { none, left_cancellative, right_cancellative, quasigroup };

// CLI spelling: none | left | right | quasigroup.
std::string_view to_string(Structure s);
Structure parse_structure(std::string_view text);

class OrderGuardError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Largest order enumerate() accepts without an override: 6, or 7 for
// quasigroups.
int order_guard(Structure s);

// Visits every table of order n with the given structure exactly once, in
// lexicographic order of the row-major entry sequence. Returns the number of
// tables visited.
std::uint64_t enumerate(int n, Structure s,
                        const std::function<void(const CayleyTable&)>& visit,
                        bool force = false);

// The enumeration split on the choice of the first row. Concatenating
// enumerate_branch over first_rows() in order reproduces enumerate().
std::vector<std::vector<std::uint8_t>> first_rows(int n, Structure s);
// `visit` returns false to stop early. Returns the number of tables visited
// (including the one that stopped the scan).
std::uint64_t enumerate_branch(int n, Structure s,
                               std::span<const std::uint8_t> first_row,
                               const std::function<bool(const CayleyTable&)>& visit);

struct Constraint {
  Structure structure = Structure::none;
  std::vector<std::string> satisfies;
  std::vector<std::string> refutes;
};

// Throws std::invalid_argument on unknown names or overlapping lists.
void validate(const Constraint& c);

struct OrderStats {
  int order = 0;
  std::uint64_t visited = 0;
  std::uint64_t matched = 0;

  friend bool operator==(const OrderStats&, const OrderStats&) = default;
};

struct SearchReport {
  std::vector<OrderStats> orders;
  std::vector<CayleyTable> witnesses;
  bool exhausted = false;
};

struct SearchOptions {
  // 0 selects std::thread::hardware_concurrency().
  unsigned workers = 1;
  bool force = false;
};

// Scans orders 1..max_order. A positive `limit` stops the scan as soon as
// that many witnesses were found; zero collects every witness.
SearchReport search(int max_order, const Constraint& c, std::size_t limit,
                    const SearchOptions& opts = {});

// Order-by-order key/value lines followed by the witnesses, each in table
// format and preceded by a blank line.
std::string render(const SearchReport& r);

// Lexicographically least table over all simultaneous relabelings.
CayleyTable canonical_form(const CayleyTable& t);
inline constexpr int kCanonicalMaxOrder = 8;

struct TheoremOrder {
  int order = 0;
  std::uint64_t visited = 0;
  // Left-cancellative tables where i2 and i3 hold.
  std::uint64_t satisfying = 0;
  // ...and i1 fails.
  std::uint64_t witnesses = 0;
};

struct TheoremReport {
  std::vector<TheoremOrder> orders;
  // At most `kMaxReportedWitnesses`, in enumeration order.
  std::vector<CayleyTable> witnesses;
  bool passed() const;
};

inline constexpr std::size_t kMaxReportedWitnesses = 10;

// Searches left-cancellative tables satisfying i2 and i3 but not i1.
// max_order is limited to 4, or 5 with `force`.
TheoremReport verify_theorem(int max_order, const SearchOptions& opts = {});
std::string render(const TheoremReport& r);

struct EquivalenceOrder {
  int order = 0;
  std::uint64_t quasigroups = 0;
  std::uint64_t i123 = 0;
  std::uint64_t kepka = 0;
  std::uint64_t corollary = 0;
  std::uint64_t trimedial = 0;
  std::uint64_t medial = 0;
  // Tables where the i1/i2/i3, kepka, corollary and trimedial verdicts
  // disagree.
  std::uint64_t disagreements = 0;
  // Medial but not trimedial.
  std::uint64_t medial_outside = 0;

  bool sets_equal() const { return disagreements == 0; }
  bool medial_subset() const { return medial_outside == 0; }
};

struct EquivalenceReport {
  std::vector<EquivalenceOrder> orders;
  std::vector<CayleyTable> disagreeing;
  bool passed() const;
};

// Over all quasigroups of each order up to max_order (at most 5).
EquivalenceReport verify_equivalences(int max_order, const SearchOptions& opts = {});
std::string render(const EquivalenceReport& r);

}  // namespace trimedial
