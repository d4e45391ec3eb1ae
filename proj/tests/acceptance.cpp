// Exit criteria: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "trimedial/cli.hpp"
#include "trimedial/model_search.hpp"
#include "trimedial/proof.hpp"
#include "trimedial/variety.hpp"

using namespace trimedial;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome theorem_verification() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  auto r = verify_theorem(4, {1, false});
  double secs = seconds_since(start);
  const std::uint64_t want[] = {1, 4, 216, 331776};
  o.require(r.orders.size() == 4, "expected four orders");
  for (std::size_t i = 0; i < r.orders.size() && i < 4; ++i) {
    o.require(r.orders[i].visited == want[i],
              "order " + std::to_string(i + 1) + " visited " +
                  std::to_string(r.orders[i].visited));
    o.require(r.orders[i].witnesses == 0, "witness at order " + std::to_string(i + 1));
  }
  o.require(r.passed(), "report did not pass");
  o.require(secs < 60.0, "took " + std::to_string(secs) + " s sequentially");
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(secs) + " s";
  return o;
}

Outcome equivalences() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  auto small = verify_equivalences(4, {0, false});
  double small_secs = seconds_since(start);
  start = std::chrono::steady_clock::now();
  auto r = verify_equivalences(5, {0, false});
  double secs = seconds_since(start);

  const std::uint64_t want[] = {1, 2, 12, 576, 161280};
  o.require(r.orders.size() == 5, "expected five orders");
  for (std::size_t i = 0; i < r.orders.size() && i < 5; ++i) {
    const auto& s = r.orders[i];
    const std::string at = " at order " + std::to_string(i + 1);
    o.require(s.quasigroups == want[i], "quasigroup count " + std::to_string(s.quasigroups) + at);
    o.require(s.sets_equal(), "S123, SK, SC, ST differ" + at);
    o.require(s.i123 == s.kepka && s.kepka == s.corollary && s.corollary == s.trimedial,
              "cardinalities differ" + at);
    o.require(s.medial_subset(), "a medial quasigroup is not trimedial" + at);
  }
  for (int n = 1; n <= 4; ++n) {
    auto filtered = oracle::latin_squares_by_filter(n).size();
    o.require(filtered == want[n - 1],
              "generate-and-filter oracle counts " + std::to_string(filtered) +
                  " at order " + std::to_string(n));
  }
  o.require(small.passed(), "orders <= 4 did not pass");
  o.require(small_secs < 10.0, "orders <= 4 took " + std::to_string(small_secs) + " s");
  o.require(secs < 600.0, "took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << "sizes";
  for (const auto& s : r.orders) d << " " << s.trimedial << "/" << s.quasigroups;
  d << "; " << small_secs << " s to order 4, " << secs << " s to order 5";
  o.detail += (o.detail.empty() ? "" : "; ") + d.str();
  return o;
}

// Every variable leaf of `t`, rewritten to every other letter.
std::vector<Term> single_symbol_mutations(const Term& t) {
  std::vector<Term> out;
  for (const auto& p : preorder_paths(t)) {
    Term leaf = subterm_at(t, p);
    if (!leaf.is_var()) continue;
    for (char c = 'a'; c <= 'z'; ++c) {
      if (c != leaf.name()) out.push_back(replace_at(t, p, Term::var(c)));
    }
  }
  return out;
}

Outcome proof_scripts() {
  Outcome o;
  const std::pair<std::string_view, const char*> expected[] = {
      {"theorem", "i1"}, {"corollary-to-i2", "i2"}, {"corollary-to-i3", "i3"}};
  std::size_t mutations = 0;
  for (auto [name, conclusion] : expected) {
    auto script = builtin_script(name);
    auto v = check_script(script);
    o.require(v.valid, std::string(name) + " is not valid: " + v.reason);
    o.require(v.derived && alpha_equal(*v.derived, builtin(conclusion)),
              std::string(name) + " does not conclude " + conclusion);
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
      for (const auto& m : single_symbol_mutations(script.steps[i].to)) {
        auto mutated = script;
        mutated.steps[i].to = m;
        ++mutations;
        o.require(!check_script(mutated).valid,
                  std::string(name) + " step " + std::to_string(i + 1) +
                      " mutation still valid: " + render(m));
      }
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(mutations) +
              " mutations all invalid";
  if (!o.ok) o.detail = o.detail.substr(0, o.detail.find("; "));
  return o;
}

Outcome enumerator_oracle() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    std::vector<CayleyTable> everything;
    enumerate(n, Structure::none, [&](const CayleyTable& t) { everything.push_back(t); });
    o.require(everything == oracle::all_tables(n), "unconstrained order differs at n=" +
                                                       std::to_string(n));
    for (Structure s : {Structure::none, Structure::left_cancellative,
                        Structure::right_cancellative, Structure::quasigroup}) {
      std::vector<CayleyTable> filtered;
      for (const auto& t : everything) {
        auto p = cancellation_profile(t);
        bool keep = s == Structure::none ||
                    (s == Structure::left_cancellative && p.left_cancellative) ||
                    (s == Structure::right_cancellative && p.right_cancellative) ||
                    (s == Structure::quasigroup && p.quasigroup);
        if (keep) filtered.push_back(t);
      }
      std::vector<CayleyTable> dfs;
      enumerate(n, s, [&](const CayleyTable& t) { dfs.push_back(t); });
      o.require(dfs == filtered, "structure " + std::string(to_string(s)) + " differs at n=" +
                                     std::to_string(n));
    }
  }
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937 rng(20261016);

  // Substitution lemma, 1000 triples.
  for (int trial = 0; trial < 1000; ++trial) {
    auto t = oracle::random_table(rng, 1 + trial % 5);
    Term term = oracle::random_term(rng, 4, "uvxyz");
    Substitution s{{'x', oracle::random_term(rng, 3, "xyz")},
                   {'u', oracle::random_term(rng, 3, "uvw")},
                   {'z', oracle::random_term(rng, 2, "x")}};
    std::uniform_int_distribution<int> el(0, t.order() - 1);
    Assignment a;
    for (char c : std::string("uvwxyz")) a[c] = el(rng);
    Assignment shifted = a;
    for (const auto& [name, image] : s) shifted[name] = evaluate(t, image, a);
    o.require(evaluate(t, substitute(term, s), a) == evaluate(t, term, shifted),
              "substitution lemma fails for " + render(term));
  }

  // Medial implies i1, i2, i3 and trimedial on all 12 + 576 quasigroups of
  // orders 3 and 4.
  const IdentityChecker medial(builtin("medial"));
  const IdentityChecker i1(builtin("i1"));
  const IdentityChecker i2(builtin("i2"));
  const IdentityChecker i3(builtin("i3"));
  std::vector<CayleyTable> q3, q4;
  enumerate(3, Structure::quasigroup, [&](const CayleyTable& t) { q3.push_back(t); });
  enumerate(4, Structure::quasigroup, [&](const CayleyTable& t) { q4.push_back(t); });
  o.require(q3.size() + q4.size() == 12 + 576, "quasigroup sample size");
  for (const auto* qs : {&q3, &q4}) {
    for (const auto& t : *qs) {
      if (!medial.holds(t)) continue;
      o.require(i1.holds(t) && i2.holds(t) && i3.holds(t) && is_trimedial(t),
                "medial quasigroup missing a consequence:\n" + render_table(t));
    }
  }

  // Isomorphism invariance of classify and canonical_form: 20 random order-4
  // quasigroups, 50 relabelings each.
  std::uniform_int_distribution<std::size_t> pick(0, q4.size() - 1);
  for (int k = 0; k < 20; ++k) {
    const CayleyTable& t = q4[pick(rng)];
    const PropertyReport base = classify(t);
    const CayleyTable cf = canonical_form(t);
    o.require(canonical_form(cf) == cf, "canonical_form is not idempotent");
    o.require(classify(cf) == base, "classify differs on the canonical form");
    for (int r = 0; r < 50; ++r) {
      CayleyTable relabeled = relabel(t, oracle::random_permutation(rng, 4));
      o.require(classify(relabeled) == base, "classify not invariant:\n" + render_table(t));
      o.require(canonical_form(relabeled) == cf,
                "canonical_form not invariant:\n" + render_table(t));
    }
  }

  // check_step soundness: every verified step, from the builtin scripts and
  // from random rule instances, holds on every order-<=3 quasigroup that
  // satisfies its rule.
  std::vector<CayleyTable> models;
  for (int n = 1; n <= 3; ++n) {
    enumerate(n, Structure::quasigroup, [&](const CayleyTable& t) { models.push_back(t); });
  }
  struct Step {
    Term from, to;
    std::string rule;
  };
  std::vector<Step> steps;
  for (auto name : kBuiltinScripts) {
    auto script = builtin_script(name);
    Term from = script.start;
    for (const auto& st : script.steps) {
      steps.push_back({from, st.to, st.by});
      from = st.to;
    }
  }
  const char* rule_names[] = {"i1", "i2", "i3", "medial", "corollary"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string name = rule_names[trial % 5];
    const Identity& rule = builtin(name);
    Substitution inst;
    for (char v : rule.vars()) inst.emplace(v, oracle::random_term(rng, 1, "abc"));
    Term host = oracle::random_term(rng, 2, "abc");
    auto paths = preorder_paths(host);
    std::uniform_int_distribution<std::size_t> at(0, paths.size() - 1);
    Path p = paths[at(rng)];
    bool reverse = rng() % 2;
    Term lhs = substitute(reverse ? rule.rhs() : rule.lhs(), inst);
    Term rhs = substitute(reverse ? rule.lhs() : rule.rhs(), inst);
    steps.push_back({replace_at(host, p, lhs), replace_at(host, p, rhs), name});
  }
  std::size_t verified_pairs = 0;
  for (const auto& st : steps) {
    RuleSet rules = rules_for(std::vector<std::string>{st.rule});
    try {
      check_step(st.from, ProofStep{st.to, st.rule, {}, {}, {}}, rules);
    } catch (const NoJustification&) {
      o.require(false, "constructed step not verified: " + render(st.from));
      continue;
    }
    const IdentityChecker rule_check(builtin(st.rule));
    const IdentityChecker step_check(Identity(st.from, st.to));
    for (const auto& m : models) {
      if (!rule_check.holds(m)) continue;
      ++verified_pairs;
      o.require(step_check.holds(m), "unsound step " + render(st.from) + " -> " +
                                         render(st.to) + " by " + st.rule);
    }
  }
  o.require(verified_pairs > 0, "no model satisfied any rule");
  return o;
}

Outcome determinism() {
  Outcome o;
  auto run = [](unsigned workers) {
    std::ostringstream out, err;
    int code = cli::run({"search", "--max-order", "4", "--structure", "quasigroup",
                         "--refutes", "medial", "--limit", "5", "--workers",
                         std::to_string(workers)},
                        out, err);
    return std::to_string(code) + "\n" + out.str() + err.str();
  };
  const std::string baseline = run(1);
  o.require(baseline.rfind("1\n", 0) == 0, "expected exit code 1 (witnesses found)");
  for (int repeat = 0; repeat < 3; ++repeat) {
    for (unsigned w : {1u, 2u, 4u, 8u}) {
      o.require(run(w) == baseline, "output differs with " + std::to_string(w) + " workers");
    }
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 theorem verification to order 4", theorem_verification},
      {"2 corollary/Kepka equivalence to order 5", equivalences},
      {"3 builtin proof scripts and mutation suite", proof_scripts},
      {"4 constrained enumeration equals filtered enumeration", enumerator_oracle},
      {"5 property suites", property_suites},
      {"6 search output independent of worker count", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << name;
    if (!o.detail.empty()) std::cout << "  (" << o.detail << ")";
    std::cout << std::endl;
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
