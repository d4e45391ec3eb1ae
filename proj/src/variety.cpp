#include "trimedial/variety.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace trimedial {

namespace {

struct Entry {
  std::string_view name;
  std::string_view text;
};

// Written out from the juxtaposition notation; square brackets and braces
// there are plain grouping.
constexpr std::array<Entry, 6> kEntries = {{
    {"medial", "(w*x)*(y*z) = (w*y)*(x*z)"},
    {"i1", "(x*x)*(y*z) = (x*y)*(x*z)"},
    {"i2", "(y*z)*(x*x) = (y*x)*(z*x)"},
    {"i3", "(x*(x*x))*(u*v) = (x*u)*((x*x)*v)"},
    {"kepka",
     "((x*x)*(y*z))*(((x*y)*(u*u))*((w*(w*w))*(z*v))) = "
     "((x*y)*(x*z))*(((x*u)*(y*u))*((w*z)*((w*w)*v)))"},
    {"corollary",
     "((x*y)*(u*u))*((w*(w*w))*(z*v)) = ((x*u)*(y*u))*((w*z)*((w*w)*v))"},
}};

std::size_t registry_index(std::string_view name) {
  for (std::size_t i = 0; i < kEntries.size(); ++i) {
    if (kEntries[i].name == name) return i;
  }
  throw UnknownIdentity(name);
}

const std::vector<Identity>& parsed_registry() {
  static const std::vector<Identity> parsed = [] {
    std::vector<Identity> out;
    for (const auto& e : kEntries) out.push_back(parse_identity(e.text));
    return out;
  }();
  return parsed;
}

const std::vector<IdentityChecker>& registry_checkers() {
  static const std::vector<IdentityChecker> checkers = [] {
    std::vector<IdentityChecker> out;
    for (const auto& id : parsed_registry()) out.emplace_back(id);
    return out;
  }();
  return checkers;
}

const IdentityChecker& medial_checker() { return registry_checkers()[0]; }

std::string valid_names() {
  std::string out;
  for (const auto& e : kEntries) {
    if (!out.empty()) out += ", ";
    out += e.name;
  }
  return out;
}

}  // namespace

UnknownIdentity::UnknownIdentity(std::string_view name)
    : std::invalid_argument("unknown identity '" + std::string(name) +
                            "'; valid names: " + valid_names()) {}

bool is_registry_name(std::string_view name) {
  return std::any_of(kEntries.begin(), kEntries.end(),
                     [&](const Entry& e) { return e.name == name; });
}

const Identity& builtin(std::string_view name) {
  return parsed_registry()[registry_index(name)];
}

std::string_view builtin_text(std::string_view name) {
  return kEntries[registry_index(name)].text;
}

Subset Subset::of(std::initializer_list<Element> elems) {
  Subset s;
  for (Element e : elems) s.insert(e);
  return s;
}

Subset Subset::full(int order) {
  return Subset(order >= 64 ? ~std::uint64_t{0}
                            : (std::uint64_t{1} << order) - 1);
}

std::size_t Subset::size() const {
  return static_cast<std::size_t>(std::popcount(mask_));
}

std::vector<Element> Subset::elements() const {
  std::vector<Element> out;
  out.reserve(size());
  for (std::uint64_t m = mask_; m; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::string render(Subset s) {
  std::string out = "{";
  bool first = true;
  for (Element e : s.elements()) {
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

Subset subgroupoid_closure(const CayleyTable& t, Subset seed) {
  Subset closed;
  std::vector<Element> pending = seed.elements();
  for (Element e : pending) closed.insert(e);
  std::vector<Element> members;
  // Each newly admitted element is multiplied with every earlier member and
  // itself, in both orders.
  while (!pending.empty()) {
    Element e = pending.back();
    pending.pop_back();
    members.push_back(e);
    for (Element m : members) {
      for (Element p : {t.entry(e, m), t.entry(m, e)}) {
        if (!closed.contains(p)) {
          closed.insert(p);
          pending.push_back(p);
        }
      }
    }
  }
  return closed;
}

NotClosed::NotClosed(Element a_, Element b_, Element product_)
    : std::invalid_argument("subset is not closed: " + std::to_string(a_) +
                            "*" + std::to_string(b_) + " = " +
                            std::to_string(product_) + " lies outside it"),
      a(a_),
      b(b_),
      product(product_) {}

namespace {
std::optional<Counterexample> medial_on_closed(const CayleyTable& t,
                                               const std::vector<Element>& elems) {
  return medial_checker().check_on(t, elems);
}
}  // namespace

std::optional<Counterexample> is_medial_on(const CayleyTable& t, Subset s) {
  auto elems = s.elements();
  for (Element a : elems) {
    for (Element b : elems) {
      Element p = t.entry(a, b);
      if (!s.contains(p)) throw NotClosed(a, b, p);
    }
  }
  return medial_on_closed(t, elems);
}

std::optional<TrimedialWitness> trimedial_witness(const CayleyTable& t) {
  const int n = t.order();
  std::unordered_set<std::uint64_t> medial_closures;
  auto try_seed = [&](Subset seed) -> std::optional<TrimedialWitness> {
    Subset c = subgroupoid_closure(t, seed);
    if (medial_closures.contains(c.mask())) return std::nullopt;
    if (auto ce = medial_on_closed(t, c.elements())) {
      return TrimedialWitness{seed, *ce};
    }
    medial_closures.insert(c.mask());
    return std::nullopt;
  };
  for (int a = 0; a < n; ++a) {
    if (auto w = try_seed(Subset::of({a}))) return w;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (auto w = try_seed(Subset::of({a, b}))) return w;
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        if (auto w = try_seed(Subset::of({a, b, c}))) return w;
      }
    }
  }
  return std::nullopt;
}

PropertyReport classify(const CayleyTable& t) {
  PropertyReport r;
  r.order = t.order();
  r.cancellation = cancellation_profile(t);
  const auto& checkers = registry_checkers();
  for (std::size_t i = 0; i < checkers.size(); ++i) {
    r.holds[i] = checkers[i].holds(t);
  }
  r.trimedial = is_trimedial(t);
  return r;
}

std::string render(const PropertyReport& r) {
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::string out;
  out += "order: " + std::to_string(r.order) + "\n";
  out += std::string("left_cancellative: ") + flag(r.cancellation.left_cancellative) + "\n";
  out += std::string("right_cancellative: ") + flag(r.cancellation.right_cancellative) + "\n";
  out += std::string("quasigroup: ") + flag(r.cancellation.quasigroup) + "\n";
  for (std::size_t i = 0; i < kRegistryNames.size(); ++i) {
    out += std::string(kRegistryNames[i]) + ": " +
           (r.holds[i] ? "holds" : "fails") + "\n";
  }
  out += std::string("trimedial: ") + flag(r.trimedial) + "\n";
  return out;
}

}  // namespace trimedial
