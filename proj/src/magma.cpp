#include "trimedial/magma.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>

namespace trimedial {

CayleyTable::CayleyTable(int order, std::vector<std::uint8_t> entries)
    : order_(order), entries_(std::move(entries)) {
  if (order < 1 || order > kMaxOrder) {
    throw TableError("table order must be in 1.." + std::to_string(kMaxOrder) +
                     ", got " + std::to_string(order));
  }
  if (entries_.size() != static_cast<std::size_t>(order) * order) {
    throw TableError("table of order " + std::to_string(order) + " needs " +
                     std::to_string(order * order) + " entries, got " +
                     std::to_string(entries_.size()));
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] >= order) {
      throw TableError("entry " + std::to_string(entries_[k]) + " at row " +
                       std::to_string(k / order) + ", column " +
                       std::to_string(k % order) + " is out of range");
    }
  }
}

TableBuilder::TableBuilder(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw TableError("table order must be in 1.." + std::to_string(kMaxOrder));
  }
  table_.order_ = order;
  table_.entries_.assign(static_cast<std::size_t>(order) * order, 0);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      lines.push_back(line);
    }
    start = end + 1;
  }
  return lines;
}

std::vector<long> parse_ints(std::string_view line, std::size_t line_no) {
  std::vector<long> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t') {
      ++i;
      continue;
    }
    std::size_t j = line.find_first_of(" \t", i);
    if (j == std::string_view::npos) j = line.size();
    std::string_view tok = line.substr(i, j - i);
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw TableError("line " + std::to_string(line_no) +
                       ": not an integer: '" + std::string(tok) + "'");
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

}  // namespace

CayleyTable load_table(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw TableError("empty table text");
  auto header = parse_ints(lines[0], 1);
  if (header.size() != 1) throw TableError("line 1: expected the table order");
  long n = header[0];
  if (n < 1 || n > kMaxOrder) {
    throw TableError("table order must be in 1.." + std::to_string(kMaxOrder) +
                     ", got " + std::to_string(n));
  }
  if (lines.size() != static_cast<std::size_t>(n) + 1) {
    throw TableError("expected " + std::to_string(n) + " rows, got " +
                     std::to_string(lines.size() - 1));
  }
  std::vector<std::uint8_t> entries;
  entries.reserve(static_cast<std::size_t>(n * n));
  for (long i = 0; i < n; ++i) {
    auto row = parse_ints(lines[static_cast<std::size_t>(i) + 1],
                          static_cast<std::size_t>(i) + 2);
    if (row.size() != static_cast<std::size_t>(n)) {
      throw TableError("row " + std::to_string(i) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(n));
    }
    for (long j = 0; j < n; ++j) {
      long v = row[static_cast<std::size_t>(j)];
      if (v < 0 || v >= n) {
        throw TableError("entry " + std::to_string(v) + " at row " +
                         std::to_string(i) + ", column " + std::to_string(j) +
                         " is out of range");
      }
      entries.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return CayleyTable(static_cast<int>(n), std::move(entries));
}

std::string render_table(const CayleyTable& t) {
  std::string out = std::to_string(t.order()) + "\n";
  for (int i = 0; i < t.order(); ++i) {
    for (int j = 0; j < t.order(); ++j) {
      if (j) out += ' ';
      out += std::to_string(t.entry(i, j));
    }
    out += '\n';
  }
  return out;
}

CayleyTable relabel(const CayleyTable& t, std::span<const int> perm) {
  const int n = t.order();
  if (perm.size() != static_cast<std::size_t>(n)) {
    throw TableError("relabeling has the wrong length");
  }
  std::vector<std::uint8_t> entries(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      entries[static_cast<std::size_t>(perm[i] * n + perm[j])] =
          static_cast<std::uint8_t>(perm[t.entry(i, j)]);
    }
  }
  return CayleyTable(n, std::move(entries));
}

UnassignedVariable::UnassignedVariable(char name)
    : std::runtime_error(std::string("variable '") + name + "' is unassigned"),
      name_(name) {}

Element evaluate(const CayleyTable& t, const Term& term, const Assignment& a) {
  if (term.is_var()) {
    auto it = a.find(term.name());
    if (it == a.end()) throw UnassignedVariable(term.name());
    return it->second;
  }
  Element l = evaluate(t, term.left(), a);
  Element r = evaluate(t, term.right(), a);
  return t.entry(l, r);
}

std::string render(const Counterexample& c) {
  std::string out;
  for (const auto& [name, value] : c.assignment) {
    out += name;
    out += '=' + std::to_string(value) + ' ';
  }
  out += "lhs=" + std::to_string(c.lhs) + " rhs=" + std::to_string(c.rhs);
  return out;
}

IdentityChecker::IdentityChecker(const Identity& id) : vars_(id.vars()) {
  std::vector<int> level;
  lhs_root_ = compile(id.lhs(), level);
  rhs_root_ = compile(id.rhs(), level);
  refresh_.resize(vars_.size());
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (level[k] >= static_cast<int>(j)) {
        refresh_[j].push_back(static_cast<int>(k));
      }
    }
  }
}

int IdentityChecker::compile(const Term& t, std::vector<int>& level) {
  Node node;
  int lvl = 0;
  if (t.is_var()) {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), t.name());
    node.var = static_cast<int>(it - vars_.begin());
    lvl = node.var;
  } else {
    node.left = compile(t.left(), level);
    node.right = compile(t.right(), level);
    lvl = std::max(level[static_cast<std::size_t>(node.left)],
                   level[static_cast<std::size_t>(node.right)]);
  }
  nodes_.push_back(node);
  level.push_back(lvl);
  return static_cast<int>(nodes_.size()) - 1;
}

std::optional<Counterexample> IdentityChecker::check(const CayleyTable& t) const {
  std::vector<Element> all(static_cast<std::size_t>(t.order()));
  for (int i = 0; i < t.order(); ++i) all[static_cast<std::size_t>(i)] = i;
  return check_on(t, all);
}

std::optional<Counterexample> IdentityChecker::check_on(
    const CayleyTable& t, std::span<const Element> domain) const {
  const std::size_t k = vars_.size();
  const std::size_t m = domain.size();
  if (m == 0) return std::nullopt;
  std::vector<std::size_t> digit(k, 0);
  std::vector<Element> value(nodes_.size(), 0);
  auto recompute = [&](std::size_t j) {
    for (int idx : refresh_[j]) {
      const Node& nd = nodes_[static_cast<std::size_t>(idx)];
      value[static_cast<std::size_t>(idx)] =
          nd.var >= 0 ? domain[digit[static_cast<std::size_t>(nd.var)]]
                      : t.entry(value[static_cast<std::size_t>(nd.left)],
                                value[static_cast<std::size_t>(nd.right)]);
    }
  };
  recompute(0);
  while (true) {
    Element l = value[static_cast<std::size_t>(lhs_root_)];
    Element r = value[static_cast<std::size_t>(rhs_root_)];
    if (l != r) {
      Counterexample c;
      for (std::size_t v = 0; v < k; ++v) c.assignment[vars_[v]] = domain[digit[v]];
      c.lhs = l;
      c.rhs = r;
      return c;
    }
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (++digit[j] < m) break;
      digit[j] = 0;
      if (j == 0) return std::nullopt;
    }
    if (k == 0) return std::nullopt;
    recompute(j);
  }
}

bool IdentityChecker::refuted_by_rows(const CayleyTable& t, int known_rows) const {
  constexpr Element kUnknown = -1;
  const std::size_t k = vars_.size();
  const auto m = static_cast<std::size_t>(t.order());
  std::vector<std::size_t> digit(k, 0);
  std::vector<Element> value(nodes_.size(), 0);
  auto recompute = [&](std::size_t j) {
    for (int idx : refresh_[j]) {
      const Node& nd = nodes_[static_cast<std::size_t>(idx)];
      Element v;
      if (nd.var >= 0) {
        v = static_cast<Element>(digit[static_cast<std::size_t>(nd.var)]);
      } else {
        Element l = value[static_cast<std::size_t>(nd.left)];
        Element r = value[static_cast<std::size_t>(nd.right)];
        v = l == kUnknown || r == kUnknown || l >= known_rows ? kUnknown : t.entry(l, r);
      }
      value[static_cast<std::size_t>(idx)] = v;
    }
  };
  recompute(0);
  while (true) {
    Element l = value[static_cast<std::size_t>(lhs_root_)];
    Element r = value[static_cast<std::size_t>(rhs_root_)];
    if (l != kUnknown && r != kUnknown && l != r) return true;
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (++digit[j] < m) break;
      digit[j] = 0;
      if (j == 0) return false;
    }
    if (k == 0) return false;
    recompute(j);
  }
}

std::optional<Counterexample> check_identity(const CayleyTable& t,
                                             const Identity& id) {
  return IdentityChecker(id).check(t);
}

CancellationProfile cancellation_profile(const CayleyTable& t) {
  const int n = t.order();
  CancellationProfile p{true, true, false};
  for (int i = 0; i < n && p.left_cancellative; ++i) {
    std::uint64_t seen = 0;
    for (int j = 0; j < n; ++j) {
      std::uint64_t bit = std::uint64_t{1} << t.entry(i, j);
      if (seen & bit) {
        p.left_cancellative = false;
        break;
      }
      seen |= bit;
    }
  }
  for (int j = 0; j < n && p.right_cancellative; ++j) {
    std::uint64_t seen = 0;
    for (int i = 0; i < n; ++i) {
      std::uint64_t bit = std::uint64_t{1} << t.entry(i, j);
      if (seen & bit) {
        p.right_cancellative = false;
        break;
      }
      seen |= bit;
    }
  }
  p.quasigroup = p.left_cancellative && p.right_cancellative;
  return p;
}

}  // namespace trimedial
