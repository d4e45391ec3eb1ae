#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimedial/magma.hpp"
#include "trimedial/term.hpp"

namespace trimedial {

// Registry names, in the fixed order used for reports.
inline constexpr std::array<std::string_view, 6> kRegistryNames = {
    "medial", "i1", "i2", "i3", "kepka", "corollary"};

class UnknownIdentity : public std::invalid_argument {
 public:
  explicit UnknownIdentity(std::string_view name);
};

bool is_registry_name(std::string_view name);
// Throws UnknownIdentity listing the valid names.
const Identity& builtin(std::string_view name);
// Canonical source text of a registry entry.
std::string_view builtin_text(std::string_view name);

// A set of elements of a table of order at most 64.
class Subset {
 public:
  Subset() = default;
  static Subset from_mask(std::uint64_t mask) { return Subset(mask); }
  static Subset of(std::initializer_list<Element> elems);
  static Subset full(int order);

  void insert(Element e) { mask_ |= bit(e); }
  bool contains(Element e) const { return (mask_ & bit(e)) != 0; }
  std::size_t size() const;
  bool empty() const { return mask_ == 0; }
  std::uint64_t mask() const { return mask_; }
  // Ascending.
  std::vector<Element> elements() const;

  friend bool operator==(Subset, Subset) = default;

 private:
  explicit Subset(std::uint64_t mask) : mask_(mask) {}
  static std::uint64_t bit(Element e) { return std::uint64_t{1} << e; }
  std::uint64_t mask_ = 0;
};

// "{0,1,2}"
std::string render(Subset s);

Subset subgroupoid_closure(const CayleyTable& t, Subset seed);

class NotClosed : public std::invalid_argument {
 public:
  NotClosed(Element a, Element b, Element product);
  Element a, b, product;
};

// Medial identity with all variables ranging over `s`.
std::optional<Counterexample> is_medial_on(const CayleyTable& t, Subset s);

struct TrimedialWitness {
  Subset seed;
  Counterexample counterexample;
};

// nullopt when every subgroupoid generated by at most three elements is
// medial; otherwise the first failing seed (by size, then lexicographically).
std::optional<TrimedialWitness> trimedial_witness(const CayleyTable& t);
inline bool is_trimedial(const CayleyTable& t) {
  return !trimedial_witness(t).has_value();
}

struct PropertyReport {
  int order = 0;
  CancellationProfile cancellation;
  // Indexed like kRegistryNames.
  std::array<bool, kRegistryNames.size()> holds{};
  bool trimedial = false;

  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

PropertyReport classify(const CayleyTable& t);
// Fixed-order "key: value" lines.
std::string render(const PropertyReport& r);

}  // namespace trimedial
