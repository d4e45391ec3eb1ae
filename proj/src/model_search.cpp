#include "trimedial/model_search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "trimedial/variety.hpp"

namespace trimedial {

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::none: return "none";
    case Structure::left_cancellative: return "left";
    case Structure::right_cancellative: return "right";
    case Structure::quasigroup: return "quasigroup";
  }
  return "?";
}

Structure parse_structure(std::string_view text) {
  if (text == "none") return Structure::none;
  if (text == "left" || text == "left_cancellative") return Structure::left_cancellative;
  if (text == "right" || text == "right_cancellative") return Structure::right_cancellative;
  if (text == "quasigroup") return Structure::quasigroup;
  throw std::invalid_argument("unknown structure '" + std::string(text) +
                              "'; expected none, left, right or quasigroup");
}

int order_guard(Structure s) { return s == Structure::quasigroup ? 7 : 6; }

namespace {

bool rows_injective(Structure s) {
  return s == Structure::left_cancellative || s == Structure::quasigroup;
}
bool cols_injective(Structure s) {
  return s == Structure::right_cancellative || s == Structure::quasigroup;
}

// Row-major depth-first filling with seen-value masks per row and column.
class Filler {
 public:
  Filler(int n, Structure s, const std::function<bool(const CayleyTable&)>& visit)
      : n_(n),
        rows_(rows_injective(s)),
        cols_(cols_injective(s)),
        builder_(n),
        row_used_(static_cast<std::size_t>(n), 0),
        col_used_(static_cast<std::size_t>(n), 0),
        visit_(visit) {}

  // Returns false if the row violates the structure.
  bool place_row(int i, std::span<const std::uint8_t> row) {
    for (int j = 0; j < n_; ++j) {
      if (row[static_cast<std::size_t>(j)] >= n_) return false;
      std::uint64_t bit = std::uint64_t{1} << row[static_cast<std::size_t>(j)];
      if (rows_ && (row_used_[static_cast<std::size_t>(i)] & bit)) return false;
      if (cols_ && (col_used_[static_cast<std::size_t>(j)] & bit)) return false;
      builder_.set(i, j, row[static_cast<std::size_t>(j)]);
      row_used_[static_cast<std::size_t>(i)] |= bit;
      col_used_[static_cast<std::size_t>(j)] |= bit;
    }
    return true;
  }

  void fill(int cell, int end) {
    if (cell == end) {
      ++count_;
      if (!visit_(builder_.view())) stopped_ = true;
      return;
    }
    const int i = cell / n_;
    const int j = cell % n_;
    auto& ru = row_used_[static_cast<std::size_t>(i)];
    auto& cu = col_used_[static_cast<std::size_t>(j)];
    const std::uint64_t forbidden = (rows_ ? ru : 0) | (cols_ ? cu : 0);
    for (int v = 0; v < n_ && !stopped_; ++v) {
      const std::uint64_t bit = std::uint64_t{1} << v;
      if (forbidden & bit) continue;
      builder_.set(i, j, static_cast<std::uint8_t>(v));
      if (rows_) ru |= bit;
      if (cols_) cu |= bit;
      fill(cell + 1, end);
      if (rows_) ru &= ~bit;
      if (cols_) cu &= ~bit;
    }
  }

  std::uint64_t count() const { return count_; }
  const TableBuilder& builder() const { return builder_; }

 private:
  int n_;
  bool rows_;
  bool cols_;
  TableBuilder builder_;
  std::vector<std::uint64_t> row_used_;
  std::vector<std::uint64_t> col_used_;
  const std::function<bool(const CayleyTable&)>& visit_;
  std::uint64_t count_ = 0;
  bool stopped_ = false;
};

void check_guard(int n, Structure s, bool force) {
  const int guard = force ? kMaxOrder : order_guard(s);
  if (n < 1 || n > guard) {
    throw OrderGuardError("order " + std::to_string(n) + " outside 1.." +
                          std::to_string(guard) + " for structure " +
                          std::string(to_string(s)));
  }
}

unsigned resolve_workers(unsigned w) {
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return w;
}

// Runs body(i) for i in [0, count) on up to `workers` threads.
template <typename Body>
void run_parallel(std::size_t count, unsigned workers, Body&& body) {
  workers = std::min<unsigned>(resolve_workers(workers),
                               static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < count; i = next++) body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// One accumulator per first-row branch, returned in branch order.
template <typename Acc, typename Visit>
std::vector<Acc> scan_branches(int n, Structure s, unsigned workers, Visit visit) {
  auto rows = first_rows(n, s);
  std::vector<Acc> out(rows.size());
  run_parallel(rows.size(), workers, [&](std::size_t i) {
    Acc& acc = out[i];
    enumerate_branch(n, s, rows[i], [&](const CayleyTable& t) {
      visit(acc, t);
      return true;
    });
  });
  return out;
}

// Left-cancellative tables under row prefix `rows[0..known)`, visited row by
// row. A prefix on which i2 or i3 already fails is skipped whole and its
// tables are counted as visited without being built.
struct TheoremAcc {
  TheoremOrder stats;
  std::vector<CayleyTable> witnesses;
};

class TheoremScan {
 public:
  TheoremScan(int n, const std::vector<std::vector<std::uint8_t>>& perms,
              const IdentityChecker& i1, const IdentityChecker& i2,
              const IdentityChecker& i3, TheoremAcc& acc)
      : n_(n), perms_(perms), i1_(i1), i2_(i2), i3_(i3), acc_(acc), builder_(n) {
    subtree_.assign(static_cast<std::size_t>(n) + 1, 1);
    for (int r = n - 1; r >= 0; --r) {
      subtree_[static_cast<std::size_t>(r)] =
          subtree_[static_cast<std::size_t>(r) + 1] * perms.size();
    }
  }

  void run_from(std::size_t first) {
    place(0, perms_[first]);
    descend(1);
  }

 private:
  void place(int r, const std::vector<std::uint8_t>& row) {
    for (int j = 0; j < n_; ++j) builder_.set(r, j, row[static_cast<std::size_t>(j)]);
  }

  // Rows 0..known-1 are placed.
  void descend(int known) {
    const CayleyTable& t = builder_.view();
    if (i2_.refuted_by_rows(t, known) || i3_.refuted_by_rows(t, known)) {
      acc_.stats.visited += subtree_[static_cast<std::size_t>(known)];
      return;
    }
    if (known == n_) {
      ++acc_.stats.visited;
      ++acc_.stats.satisfying;
      if (i1_.holds(t)) return;
      ++acc_.stats.witnesses;
      if (acc_.witnesses.size() < kMaxReportedWitnesses) acc_.witnesses.push_back(t);
      return;
    }
    for (const auto& row : perms_) {
      place(known, row);
      descend(known + 1);
    }
  }

  int n_;
  const std::vector<std::vector<std::uint8_t>>& perms_;
  const IdentityChecker& i1_;
  const IdentityChecker& i2_;
  const IdentityChecker& i3_;
  TheoremAcc& acc_;
  TableBuilder builder_;
  // subtree_[k]: tables sharing a given prefix of k rows.
  std::vector<std::uint64_t> subtree_;
};

}  // namespace

std::uint64_t enumerate(int n, Structure s,
                        const std::function<void(const CayleyTable&)>& visit,
                        bool force) {
  check_guard(n, s, force);
  std::function<bool(const CayleyTable&)> wrapped = [&](const CayleyTable& t) {
    visit(t);
    return true;
  };
  Filler f(n, s, wrapped);
  f.fill(0, n * n);
  return f.count();
}

std::vector<std::vector<std::uint8_t>> first_rows(int n, Structure s) {
  std::vector<std::vector<std::uint8_t>> rows;
  const Filler* self = nullptr;
  std::function<bool(const CayleyTable&)> collect = [&](const CayleyTable&) {
    std::vector<std::uint8_t> row(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = self->builder().get(0, j);
    }
    rows.push_back(std::move(row));
    return true;
  };
  Filler f(n, s, collect);
  self = &f;
  f.fill(0, n);
  return rows;
}

std::uint64_t enumerate_branch(int n, Structure s,
                               std::span<const std::uint8_t> first_row,
                               const std::function<bool(const CayleyTable&)>& visit) {
  if (first_row.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("first row has the wrong length");
  }
  Filler f(n, s, visit);
  if (!f.place_row(0, first_row)) return 0;
  f.fill(n, n * n);
  return f.count();
}

void validate(const Constraint& c) {
  for (const auto* list : {&c.satisfies, &c.refutes}) {
    for (const auto& name : *list) {
      if (!is_registry_name(name)) throw UnknownIdentity(name);
    }
  }
  for (const auto& name : c.satisfies) {
    if (std::find(c.refutes.begin(), c.refutes.end(), name) != c.refutes.end()) {
      throw std::invalid_argument("identity '" + name +
                                  "' is both required and refuted");
    }
  }
}

namespace {

struct Matcher {
  std::vector<IdentityChecker> satisfies;
  std::vector<IdentityChecker> refutes;

  explicit Matcher(const Constraint& c) {
    for (const auto& name : c.satisfies) satisfies.emplace_back(builtin(name));
    for (const auto& name : c.refutes) refutes.emplace_back(builtin(name));
  }

  bool operator()(const CayleyTable& t) const {
    for (const auto& ch : satisfies) {
      if (!ch.holds(t)) return false;
    }
    for (const auto& ch : refutes) {
      if (ch.holds(t)) return false;
    }
    return true;
  }
};

struct SearchBranch {
  std::uint64_t visited = 0;
  // (1-based visit index within the branch, table)
  std::vector<std::pair<std::uint64_t, CayleyTable>> matches;
  // A table followed the last wanted match.
  bool has_more = false;
};

void lower_to(std::atomic<std::size_t>& a, std::size_t v) {
  std::size_t cur = a.load();
  while (v < cur && !a.compare_exchange_weak(cur, v)) {
  }
}

}  // namespace

SearchReport search(int max_order, const Constraint& c, std::size_t limit,
                    const SearchOptions& opts) {
  validate(c);
  check_guard(max_order, c.structure, opts.force);
  const Matcher matches(c);
  SearchReport report;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  for (int n = 1; n <= max_order; ++n) {
    const std::size_t wanted = limit == 0 ? kNone : limit - report.witnesses.size();
    auto rows = first_rows(n, c.structure);
    std::vector<SearchBranch> branches(rows.size());
    // Branches past `cutoff` cannot contribute to the merged result.
    std::atomic<std::size_t> cutoff{kNone};
    std::mutex progress_mu;
    std::vector<char> done(rows.size(), 0);
    std::size_t prefix = 0;
    std::size_t prefix_matches = 0;

    run_parallel(rows.size(), opts.workers, [&](std::size_t i) {
      if (i > cutoff.load()) return;
      SearchBranch& br = branches[i];
      bool saturated = false;
      enumerate_branch(n, c.structure, rows[i], [&](const CayleyTable& t) {
        if (saturated) {
          br.has_more = true;
          return false;
        }
        ++br.visited;
        if (matches(t)) {
          br.matches.emplace_back(br.visited, t);
          if (br.matches.size() == wanted) saturated = true;
        }
        return true;
      });
      if (wanted == kNone) return;
      if (br.matches.size() >= wanted) lower_to(cutoff, i);
      std::lock_guard lock(progress_mu);
      done[i] = 1;
      while (prefix < done.size() && done[prefix]) {
        prefix_matches += branches[prefix].matches.size();
        if (prefix_matches >= wanted) lower_to(cutoff, prefix);
        ++prefix;
      }
    });

    OrderStats stats{n, 0, 0};
    bool stopped = false;
    const std::size_t last = std::min(cutoff.load(), rows.size() - 1);
    for (std::size_t i = 0; i <= last && !stopped; ++i) {
      const SearchBranch& br = branches[i];
      for (const auto& [index, table] : br.matches) {
        report.witnesses.push_back(table);
        ++stats.matched;
        if (limit != 0 && report.witnesses.size() == limit) {
          stats.visited += index;
          stopped = true;
          // Truthful even when the final match is the very last table.
          report.exhausted = n == max_order && i + 1 == rows.size() &&
                             index == br.visited && !br.has_more;
          break;
        }
      }
      if (!stopped) stats.visited += br.visited;
    }
    report.orders.push_back(stats);
    if (stopped) return report;
  }
  report.exhausted = true;
  return report;
}

std::string render(const SearchReport& r) {
  std::string out;
  for (const auto& o : r.orders) {
    out += "order: " + std::to_string(o.order) +
           " visited: " + std::to_string(o.visited) +
           " matched: " + std::to_string(o.matched) + "\n";
  }
  out += std::string("exhausted: ") + (r.exhausted ? "true" : "false") + "\n";
  out += "witnesses: " + std::to_string(r.witnesses.size()) + "\n";
  for (const auto& t : r.witnesses) out += "\n" + render_table(t);
  return out;
}

CayleyTable canonical_form(const CayleyTable& t) {
  const int n = t.order();
  if (n > kCanonicalMaxOrder) {
    throw OrderGuardError("canonical_form supports order up to " +
                          std::to_string(kCanonicalMaxOrder) + ", got " +
                          std::to_string(n));
  }
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> inv(perm.size());
  std::vector<std::uint8_t> best(t.entries().begin(), t.entries().end());
  std::vector<std::uint8_t> cand(cells);
  do {
    for (int e = 0; e < n; ++e) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(e)])] = e;
    // Build the relabeled table cell by cell in target order; abandon as soon
    // as it compares greater than the best so far.
    bool less = false;
    bool greater = false;
    for (std::size_t k = 0; k < cells && !greater; ++k) {
      const int a = inv[k / static_cast<std::size_t>(n)];
      const int b = inv[k % static_cast<std::size_t>(n)];
      const auto v = static_cast<std::uint8_t>(perm[static_cast<std::size_t>(t.entry(a, b))]);
      cand[k] = v;
      if (!less) {
        if (v < best[k]) less = true;
        else if (v > best[k]) greater = true;
      }
    }
    if (less) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return CayleyTable(n, std::move(best));
}

bool TheoremReport::passed() const {
  return std::all_of(orders.begin(), orders.end(),
                     [](const TheoremOrder& o) { return o.witnesses == 0; });
}

TheoremReport verify_theorem(int max_order, const SearchOptions& opts) {
  const int guard = opts.force ? 5 : 4;
  if (max_order < 1 || max_order > guard) {
    throw OrderGuardError("verify theorem supports max order 1.." +
                          std::to_string(guard) +
                          (opts.force ? "" : " (5 with --force)") + ", got " +
                          std::to_string(max_order));
  }
  const IdentityChecker i1(builtin("i1"));
  const IdentityChecker i2(builtin("i2"));
  const IdentityChecker i3(builtin("i3"));
  TheoremReport report;
  for (int n = 1; n <= max_order; ++n) {
    const auto perms = first_rows(n, Structure::left_cancellative);
    std::vector<TheoremAcc> branches(perms.size());
    run_parallel(perms.size(), opts.workers, [&](std::size_t i) {
      TheoremScan(n, perms, i1, i2, i3, branches[i]).run_from(i);
    });
    TheoremOrder total{n, 0, 0, 0};
    for (const auto& b : branches) {
      total.visited += b.stats.visited;
      total.satisfying += b.stats.satisfying;
      total.witnesses += b.stats.witnesses;
      for (const auto& w : b.witnesses) {
        if (report.witnesses.size() < kMaxReportedWitnesses) report.witnesses.push_back(w);
      }
    }
    report.orders.push_back(total);
  }
  return report;
}

std::string render(const TheoremReport& r) {
  std::string out;
  for (const auto& o : r.orders) {
    out += "order: " + std::to_string(o.order) +
           " visited: " + std::to_string(o.visited) +
           " satisfying_i2_i3: " + std::to_string(o.satisfying) +
           " witnesses: " + std::to_string(o.witnesses) + "\n";
  }
  out += std::string("result: ") + (r.passed() ? "pass" : "fail") + "\n";
  for (const auto& t : r.witnesses) out += "\n" + render_table(t);
  return out;
}

bool EquivalenceReport::passed() const {
  return std::all_of(orders.begin(), orders.end(), [](const EquivalenceOrder& o) {
    return o.sets_equal() && o.medial_subset();
  });
}

EquivalenceReport verify_equivalences(int max_order, const SearchOptions& opts) {
  if (max_order < 1 || max_order > 5) {
    throw OrderGuardError("verify equivalences supports max order 1..5, got " +
                          std::to_string(max_order));
  }
  const IdentityChecker medial(builtin("medial"));
  const IdentityChecker i1(builtin("i1"));
  const IdentityChecker i2(builtin("i2"));
  const IdentityChecker i3(builtin("i3"));
  const IdentityChecker kepka(builtin("kepka"));
  const IdentityChecker corollary(builtin("corollary"));
  struct Acc {
    EquivalenceOrder stats;
    std::vector<CayleyTable> disagreeing;
  };
  EquivalenceReport report;
  for (int n = 1; n <= max_order; ++n) {
    auto branches = scan_branches<Acc>(
        n, Structure::quasigroup, opts.workers, [&](Acc& acc, const CayleyTable& t) {
          auto& s = acc.stats;
          ++s.quasigroups;
          const bool in123 = i1.holds(t) && i2.holds(t) && i3.holds(t);
          const bool ink = kepka.holds(t);
          const bool inc = corollary.holds(t);
          const bool intr = is_trimedial(t);
          const bool inm = medial.holds(t);
          s.i123 += in123;
          s.kepka += ink;
          s.corollary += inc;
          s.trimedial += intr;
          s.medial += inm;
          if (!(in123 == ink && ink == inc && inc == intr)) {
            ++s.disagreements;
            if (acc.disagreeing.size() < kMaxReportedWitnesses) acc.disagreeing.push_back(t);
          }
          if (inm && !intr) ++s.medial_outside;
        });
    EquivalenceOrder total;
    total.order = n;
    for (const auto& b : branches) {
      const auto& s = b.stats;
      total.quasigroups += s.quasigroups;
      total.i123 += s.i123;
      total.kepka += s.kepka;
      total.corollary += s.corollary;
      total.trimedial += s.trimedial;
      total.medial += s.medial;
      total.disagreements += s.disagreements;
      total.medial_outside += s.medial_outside;
      for (const auto& t : b.disagreeing) {
        if (report.disagreeing.size() < kMaxReportedWitnesses) report.disagreeing.push_back(t);
      }
    }
    report.orders.push_back(total);
  }
  return report;
}

std::string render(const EquivalenceReport& r) {
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::string out;
  for (const auto& o : r.orders) {
    out += "order: " + std::to_string(o.order) +
           " quasigroups: " + std::to_string(o.quasigroups) +
           " i123: " + std::to_string(o.i123) +
           " kepka: " + std::to_string(o.kepka) +
           " corollary: " + std::to_string(o.corollary) +
           " trimedial: " + std::to_string(o.trimedial) +
           " medial: " + std::to_string(o.medial) +
           " sets_equal: " + flag(o.sets_equal()) +
           " medial_subset: " + flag(o.medial_subset()) + "\n";
  }
  out += std::string("result: ") + (r.passed() ? "pass" : "fail") + "\n";
  for (const auto& t : r.disagreeing) out += "\n" + render_table(t);
  return out;
}

}  // namespace trimedial
