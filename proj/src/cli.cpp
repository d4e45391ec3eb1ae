#include "trimedial/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "trimedial/magma.hpp"
#include "trimedial/model_search.hpp"
#include "trimedial/proof.hpp"
#include "trimedial/variety.hpp"

namespace trimedial::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Subset parse_seed(const std::string& text, int order) {
  Subset s;
  for (const auto& tok : split_commas(text)) {
    int v = -1;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw InputError("seed element '" + tok + "' is not an integer");
    }
    if (v < 0 || v >= order) {
      throw InputError("seed element " + tok + " is outside 0.." +
                       std::to_string(order - 1));
    }
    s.insert(v);
  }
  return s;
}

std::vector<std::string> name_list(const std::string& text) {
  if (text.empty()) return {};
  return split_commas(text);
}

const char* stage_name(Verdict::Stage s) {
  switch (s) {
    case Verdict::Stage::none: return "none";
    case Verdict::Stage::step: return "step";
    case Verdict::Stage::unknown_rule: return "unknown rule";
    case Verdict::Stage::cancellation: return "cancellation";
    case Verdict::Stage::conclusion: return "conclusion";
  }
  return "?";
}

int report_proof(const ProofScript& script, std::ostream& out) {
  Verdict v = check_script(script);
  out << "start " << render(script.start) << "\n";
  for (std::size_t i = 0; i < v.justifications.size(); ++i) {
    out << render_step(script.steps[i].to, script.steps[i].by, v.justifications[i])
        << "\n";
  }
  if (script.cancellation && v.derived) {
    out << "cancel " << (*script.cancellation == Side::left ? "left" : "right") << "\n";
  }
  if (v.derived) out << "derived " << render(*v.derived) << "\n";
  out << "conclusion " << render(script.conclusion) << "\n";
  if (v.valid) {
    out << "verdict: valid\n";
    return kOk;
  }
  out << "verdict: invalid";
  if (v.step) out << " at step " << v.step;
  out << " (" << stage_name(v.stage) << "): " << v.reason << "\n";
  return kRefuted;
}

}  // namespace

std::string usage() {
  return "usage:\n"
         "  trimedial check --table FILE (--identity \"TEXT\" | --name NAME)\n"
         "  trimedial props --table FILE\n"
         "  trimedial closure --table FILE --seed \"e1,e2,...\"\n"
         "  trimedial enumerate --order N --structure none|left|right|quasigroup"
         " [--count-only] [--force]\n"
         "  trimedial search --max-order N --structure S [--satisfies a,b]"
         " [--refutes c,d] [--limit K] [--canonical] [--workers W] [--force]\n"
         "  trimedial verify theorem --max-order N [--force] [--workers W]\n"
         "  trimedial verify equivalences --max-order N [--workers W]\n"
         "  trimedial proof check FILE\n"
         "  trimedial proof builtin NAME\n"
         "identity names: medial, i1, i2, i3, kepka, corollary\n"
         "builtin proofs: theorem, corollary-to-i2, corollary-to-i3\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cayley-table and equational-proof toolkit for trimedial quasigroups",
               "trimedial"};
  app.require_subcommand(1, 1);
  app.set_help_flag();

  std::string table_path;
  std::string identity_text;
  std::string identity_name;
  std::string seed_text;
  int order = 0;
  int max_order = 0;
  std::string structure_text;
  bool count_only = false;
  bool force = false;
  std::string satisfies_text;
  std::string refutes_text;
  std::size_t limit = 1;
  bool canonical = false;
  unsigned workers = 0;
  std::string proof_arg;

  auto* check = app.add_subcommand("check", "check an identity on a table");
  check->add_option("--table", table_path)->required();
  auto* id_opt = check->add_option("--identity", identity_text);
  auto* name_opt = check->add_option("--name", identity_name);
  id_opt->excludes(name_opt);

  auto* props = app.add_subcommand("props", "report every property of a table");
  props->add_option("--table", table_path)->required();

  auto* closure = app.add_subcommand("closure", "subgroupoid generated by a seed");
  closure->add_option("--table", table_path)->required();
  closure->add_option("--seed", seed_text)->required();

  auto* enumerate_cmd = app.add_subcommand("enumerate", "list all tables of one order");
  enumerate_cmd->add_option("--order", order)->required();
  enumerate_cmd->add_option("--structure", structure_text)->required();
  enumerate_cmd->add_flag("--count-only", count_only);
  enumerate_cmd->add_flag("--force", force);

  auto* search_cmd = app.add_subcommand("search", "search for tables meeting a constraint");
  search_cmd->add_option("--max-order", max_order)->required();
  search_cmd->add_option("--structure", structure_text)->required();
  search_cmd->add_option("--satisfies", satisfies_text);
  search_cmd->add_option("--refutes", refutes_text);
  search_cmd->add_option("--limit", limit);
  search_cmd->add_flag("--canonical", canonical);
  search_cmd->add_option("--workers", workers);
  search_cmd->add_flag("--force", force);

  auto* verify = app.add_subcommand("verify", "exhaustive verification campaigns");
  verify->require_subcommand(1, 1);
  auto* theorem = verify->add_subcommand("theorem", "left cancellation + i2 + i3 => i1");
  theorem->add_option("--max-order", max_order)->required();
  theorem->add_flag("--force", force);
  theorem->add_option("--workers", workers);
  auto* equivalences =
      verify->add_subcommand("equivalences", "i1+i2+i3 = kepka = corollary = trimedial");
  equivalences->add_option("--max-order", max_order)->required();
  equivalences->add_option("--workers", workers);

  auto* proof = app.add_subcommand("proof", "check equational proofs");
  proof->require_subcommand(1, 1);
  auto* proof_check = proof->add_subcommand("check", "check a proof script file");
  proof_check->add_option("FILE", proof_arg)->required();
  auto* proof_builtin = proof->add_subcommand("builtin", "check a builtin proof");
  proof_builtin->add_option("NAME", proof_arg)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (check->parsed() && id_opt->count() + name_opt->count() != 1) {
      throw CLI::ValidationError("check needs exactly one of --identity or --name");
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << usage();
    return kUsage;
  }

  try {
    if (check->parsed()) {
      CayleyTable t = load_table(read_file(table_path));
      Identity id = name_opt->count() ? builtin(identity_name) : parse_identity(identity_text);
      if (auto ce = check_identity(t, id)) {
        out << "counterexample " << render(*ce) << "\n";
        return kRefuted;
      }
      out << "holds\n";
      return kOk;
    }
    if (props->parsed()) {
      out << render(classify(load_table(read_file(table_path))));
      return kOk;
    }
    if (closure->parsed()) {
      CayleyTable t = load_table(read_file(table_path));
      out << "closure " << render(subgroupoid_closure(t, parse_seed(seed_text, t.order())))
          << "\n";
      return kOk;
    }
    if (enumerate_cmd->parsed()) {
      const Structure s = parse_structure(structure_text);
      bool first = true;
      auto count = enumerate(order, s, [&](const CayleyTable& t) {
        if (count_only) return;
        if (!first) out << "\n";
        out << render_table(t);
        first = false;
      }, force);
      if (count_only) out << "count: " << count << "\n";
      return kOk;
    }
    if (search_cmd->parsed()) {
      Constraint c{parse_structure(structure_text), name_list(satisfies_text),
                   name_list(refutes_text)};
      SearchReport r = search(max_order, c, limit, SearchOptions{workers, force});
      const bool found = !r.witnesses.empty();
      if (canonical) {
        std::vector<CayleyTable> classes;
        std::set<CayleyTable> seen;
        for (const auto& w : r.witnesses) {
          CayleyTable cf = canonical_form(w);
          if (seen.insert(cf).second) classes.push_back(cf);
        }
        r.witnesses = std::move(classes);
      }
      out << render(r);
      return found ? kRefuted : kOk;
    }
    if (theorem->parsed()) {
      TheoremReport r = verify_theorem(max_order, SearchOptions{workers, force});
      out << render(r);
      return r.passed() ? kOk : kRefuted;
    }
    if (equivalences->parsed()) {
      EquivalenceReport r = verify_equivalences(max_order, SearchOptions{workers, false});
      out << render(r);
      return r.passed() ? kOk : kRefuted;
    }
    if (proof_check->parsed()) {
      return report_proof(parse_script(read_file(proof_arg)), out);
    }
    if (proof_builtin->parsed()) {
      return report_proof(builtin_script(proof_arg), out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << usage();
  return kUsage;
}

}  // namespace trimedial::cli
