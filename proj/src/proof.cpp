#include "trimedial/proof.hpp"

#include <algorithm>

#include "trimedial/variety.hpp"

namespace trimedial {

UnknownRule::UnknownRule(const std::string& name)
    : std::invalid_argument("rule '" + name + "' is not among the given identities") {}

RuleSet rules_for(std::span<const std::string> given) {
  RuleSet rules;
  for (const auto& name : given) rules.emplace(name, builtin(name));
  return rules;
}

bool match(const Term& pattern, const Term& term, Substitution& theta) {
  if (pattern.is_var()) {
    auto [it, inserted] = theta.try_emplace(pattern.name(), term);
    return inserted || it->second == term;
  }
  if (term.is_var()) return false;
  return match(pattern.left(), term.left(), theta) &&
         match(pattern.right(), term.right(), theta);
}

namespace {

const char* direction_name(Direction d) {
  return d == Direction::forward ? "fwd" : "rev";
}

std::string render_substitution(const Substitution& s) {
  std::string out;
  for (const auto& [v, t] : s) {
    if (!out.empty()) out += ',';
    out += v;
    out += '=' + render(t);
  }
  return out;
}

std::optional<Justification> try_rewrite(const Term& from, const Term& to,
                                         const Identity& rule, const Path& p,
                                         Direction d,
                                         const std::optional<Substitution>& hint) {
  const Term& src = d == Direction::forward ? rule.lhs() : rule.rhs();
  const Term& dst = d == Direction::forward ? rule.rhs() : rule.lhs();
  Substitution theta = hint.value_or(Substitution{});
  if (!match(src, subterm_at(from, p), theta)) return std::nullopt;
  std::optional<Term> target;
  try {
    target = subterm_at(to, p);
  } catch (const InvalidPath&) {
    return std::nullopt;
  }
  if (!match(dst, *target, theta)) return std::nullopt;
  if (replace_at(from, p, substitute(dst, theta)) != to) return std::nullopt;
  Justification j{d, p, {}};
  for (char v : rule.vars()) j.substitution.emplace(v, theta.at(v));
  return j;
}

}  // namespace

Justification check_step(const Term& from, const ProofStep& step,
                         const RuleSet& rules) {
  auto rule_it = rules.find(step.by);
  if (rule_it == rules.end()) throw UnknownRule(step.by);
  const Identity& rule = rule_it->second;

  std::vector<Path> paths;
  if (step.at) {
    try {
      subterm_at(from, *step.at);
      paths.push_back(*step.at);
    } catch (const InvalidPath&) {
    }
  } else {
    paths = preorder_paths(from);
  }
  std::vector<Direction> dirs;
  if (step.direction) {
    dirs.push_back(*step.direction);
  } else {
    dirs = {Direction::forward, Direction::reverse};
  }
  for (const auto& p : paths) {
    for (Direction d : dirs) {
      if (auto j = try_rewrite(from, step.to, rule, p, d, step.with)) return *j;
    }
  }
  throw NoJustification("no instance of " + step.by + " rewrites " +
                        render(from) + " into " + render(step.to));
}

CancelError::CancelError(Kind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

Identity cancel(const Term& lhs, const Term& rhs, Side side) {
  if (lhs.is_var() || rhs.is_var()) {
    throw CancelError(CancelError::Kind::shape,
                      "cannot cancel: " + render(lhs.is_var() ? lhs : rhs) +
                          " is a variable");
  }
  if (side == Side::left) {
    if (lhs.left() != rhs.left()) {
      throw CancelError(CancelError::Kind::mismatch,
                        "left factors differ: " + render(lhs.left()) + " vs " +
                            render(rhs.left()));
    }
    return Identity(lhs.right(), rhs.right());
  }
  if (lhs.right() != rhs.right()) {
    throw CancelError(CancelError::Kind::mismatch,
                      "right factors differ: " + render(lhs.right()) + " vs " +
                          render(rhs.right()));
  }
  return Identity(lhs.left(), rhs.left());
}

namespace {
bool rename_into(const Term& a, const Term& b, std::map<char, char>& fwd,
                 std::map<char, char>& back) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    auto [f, fi] = fwd.try_emplace(a.name(), b.name());
    auto [r, ri] = back.try_emplace(b.name(), a.name());
    return f->second == b.name() && r->second == a.name();
  }
  return rename_into(a.left(), b.left(), fwd, back) &&
         rename_into(a.right(), b.right(), fwd, back);
}
}  // namespace

bool alpha_equal(const Identity& a, const Identity& b) {
  std::map<char, char> fwd;
  std::map<char, char> back;
  return rename_into(a.lhs(), b.lhs(), fwd, back) &&
         rename_into(a.rhs(), b.rhs(), fwd, back);
}

Verdict check_script(const ProofScript& script) {
  Verdict v;
  RuleSet rules;
  try {
    rules = rules_for(script.given);
  } catch (const UnknownIdentity& e) {
    v.stage = Verdict::Stage::unknown_rule;
    v.reason = e.what();
    return v;
  }
  Term current = script.start;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const ProofStep& step = script.steps[i];
    try {
      v.justifications.push_back(check_step(current, step, rules));
    } catch (const UnknownRule& e) {
      v.stage = Verdict::Stage::unknown_rule;
      v.step = i + 1;
      v.reason = e.what();
      return v;
    } catch (const NoJustification& e) {
      v.stage = Verdict::Stage::step;
      v.step = i + 1;
      v.reason = e.what();
      return v;
    }
    current = step.to;
  }
  if (script.cancellation) {
    try {
      v.derived = cancel(script.start, current, *script.cancellation);
    } catch (const CancelError& e) {
      v.stage = Verdict::Stage::cancellation;
      v.reason = e.what();
      return v;
    }
  } else {
    v.derived = Identity(script.start, current);
  }
  if (!alpha_equal(*v.derived, script.conclusion)) {
    v.stage = Verdict::Stage::conclusion;
    v.reason = "derived " + render(*v.derived) +
               " is not a renaming of " + render(script.conclusion);
    return v;
  }
  v.valid = true;
  return v;
}

ScriptError::ScriptError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Splits off the first whitespace-delimited word.
std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
  s = trim(s);
  auto e = s.find_first_of(" \t");
  if (e == std::string_view::npos) return {s, {}};
  return {s.substr(0, e), trim(s.substr(e))};
}

// Position of `word` as a standalone whitespace-delimited token.
std::size_t find_word(std::string_view s, std::string_view word) {
  for (std::size_t pos = s.find(word); pos != std::string_view::npos;
       pos = s.find(word, pos + 1)) {
    bool start_ok = pos == 0 || s[pos - 1] == ' ' || s[pos - 1] == '\t';
    std::size_t end = pos + word.size();
    bool end_ok = end == s.size() || s[end] == ' ' || s[end] == '\t';
    if (start_ok && end_ok) return pos;
  }
  return std::string_view::npos;
}

Substitution parse_with(std::string_view text, std::size_t line) {
  Substitution s;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view binding = trim(text.substr(start, comma - start));
    auto eq = binding.find('=');
    if (eq == std::string_view::npos) {
      throw ScriptError(line, "binding '" + std::string(binding) + "' lacks '='");
    }
    std::string_view name = trim(binding.substr(0, eq));
    if (name.size() != 1 || name[0] < 'a' || name[0] > 'z') {
      throw ScriptError(line, "binding names a non-variable '" + std::string(name) + "'");
    }
    if (!s.emplace(name[0], parse_term(binding.substr(eq + 1))).second) {
      throw ScriptError(line, std::string("variable '") + name[0] + "' bound twice");
    }
    start = comma + 1;
  }
  return s;
}

ProofStep parse_step(std::string_view rest, std::size_t line) {
  std::size_t by = find_word(rest, "by");
  if (by == std::string_view::npos) throw ScriptError(line, "step lacks 'by <rule>'");
  ProofStep step{parse_term(rest.substr(0, by)), {}, {}, {}, {}};
  auto [name, options] = split_word(rest.substr(by + 2));
  if (name.empty()) throw ScriptError(line, "step lacks a rule name");
  step.by = std::string(name);
  while (!options.empty()) {
    auto [word, tail] = split_word(options);
    if (word == "fwd" || word == "rev") {
      if (step.direction) throw ScriptError(line, "direction given twice");
      step.direction = word == "fwd" ? Direction::forward : Direction::reverse;
      options = tail;
    } else if (word == "at") {
      if (step.at) throw ScriptError(line, "path given twice");
      auto [path, after] = split_word(tail);
      if (path.empty()) throw ScriptError(line, "'at' lacks a path");
      step.at = parse_path(path);
      options = after;
    } else if (word == "with") {
      if (tail.empty()) throw ScriptError(line, "'with' lacks bindings");
      step.with = parse_with(tail, line);
      options = {};
    } else {
      throw ScriptError(line, "unexpected '" + std::string(word) + "'");
    }
  }
  return step;
}

}  // namespace

ProofScript parse_script(std::string_view text) {
  std::vector<std::string> given;
  std::optional<Term> start;
  std::vector<ProofStep> steps;
  std::optional<Side> cancellation;
  std::optional<Identity> conclusion;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (conclusion) throw ScriptError(line_no, "content after 'qed'");
    try {
      if (line.front() == '=') {
        if (!start) throw ScriptError(line_no, "step before 'start'");
        if (cancellation) throw ScriptError(line_no, "step after 'cancel'");
        steps.push_back(parse_step(line.substr(1), line_no));
        continue;
      }
      auto [keyword, rest] = split_word(line);
      if (keyword == "given") {
        if (start) throw ScriptError(line_no, "'given' after 'start'");
        if (!is_registry_name(rest)) throw ScriptError(line_no, UnknownIdentity(rest).what());
        given.emplace_back(rest);
      } else if (keyword == "start") {
        if (start) throw ScriptError(line_no, "second 'start'");
        start = parse_term(rest);
      } else if (keyword == "cancel") {
        if (!start) throw ScriptError(line_no, "'cancel' before 'start'");
        if (cancellation) throw ScriptError(line_no, "second 'cancel'");
        if (rest == "left") {
          cancellation = Side::left;
        } else if (rest == "right") {
          cancellation = Side::right;
        } else {
          throw ScriptError(line_no, "expected 'cancel left' or 'cancel right'");
        }
      } else if (keyword == "qed") {
        if (!start) throw ScriptError(line_no, "'qed' before 'start'");
        conclusion = parse_identity(rest);
      } else {
        throw ScriptError(line_no, "unknown directive '" + std::string(keyword) + "'");
      }
    } catch (const ParseError& e) {
      throw ScriptError(line_no, e.what());
    }
  }
  if (!start) throw ScriptError(line_no, "missing 'start'");
  if (!conclusion) throw ScriptError(line_no, "missing 'qed'");
  if (steps.empty() && !cancellation) {
    throw ScriptError(line_no, "script has neither steps nor a cancellation");
  }
  return ProofScript{std::move(given), *start, std::move(steps), cancellation,
                     *conclusion};
}

std::string render_step(const Term& to, const std::string& by,
                        const Justification& j) {
  std::string out = "= " + render(to) + " by " + by + " " +
                    direction_name(j.direction) + " at " + render_path(j.path);
  if (!j.substitution.empty()) out += " with " + render_substitution(j.substitution);
  return out;
}

std::string render_script(const ProofScript& script) {
  std::string out;
  for (const auto& g : script.given) out += "given " + g + "\n";
  out += "start " + render(script.start) + "\n";
  for (const auto& s : script.steps) {
    out += "= " + render(s.to) + " by " + s.by;
    if (s.direction) out += std::string(" ") + direction_name(*s.direction);
    if (s.at) out += " at " + render_path(*s.at);
    if (s.with) out += " with " + render_substitution(*s.with);
    out += "\n";
  }
  if (script.cancellation) {
    out += std::string("cancel ") +
           (*script.cancellation == Side::left ? "left" : "right") + "\n";
  }
  out += "qed " + render(script.conclusion) + "\n";
  return out;
}

namespace {

constexpr std::string_view kTheorem = R"(# i2 and i3 with left cancellation imply i1.
given i2
given i3
start (x*(x*z))*((x*x)*(y*z))
= (x*(x*x))*((x*z)*(y*z)) by i3
= (x*(x*x))*((x*y)*(z*z)) by i2
= (x*(x*y))*((x*x)*(z*z)) by i3
= (x*(x*y))*((x*z)*(x*z)) by i2
= (x*(x*z))*((x*y)*(x*z)) by i2
cancel left
qed (x*x)*(y*z) = (x*y)*(x*z)
)";

// The corollary instance z = w*w, as a single rewrite between its two sides.
constexpr std::string_view kCorollaryToI2 = R"(# corollary with z = w*w, then right cancellation, gives i2.
given corollary
start ((x*y)*(u*u))*((w*(w*w))*((w*w)*v))
= ((x*u)*(y*u))*((w*(w*w))*((w*w)*v)) by corollary fwd at . with z=(w*w)
cancel right
qed (y*z)*(x*x) = (y*x)*(z*x)
)";

constexpr std::string_view kCorollaryToI3 = R"(# corollary with y = u, then left cancellation, gives i3.
given corollary
start ((x*u)*(u*u))*((w*(w*w))*(z*v))
= ((x*u)*(u*u))*((w*z)*((w*w)*v)) by corollary fwd at . with y=u
cancel left
qed (x*(x*x))*(u*v) = (x*u)*((x*x)*v)
)";

}  // namespace

std::string_view builtin_script_text(std::string_view name) {
  if (name == "theorem") return kTheorem;
  if (name == "corollary-to-i2") return kCorollaryToI2;
  if (name == "corollary-to-i3") return kCorollaryToI3;
  throw std::invalid_argument("unknown builtin script '" + std::string(name) +
                              "'; valid names: theorem, corollary-to-i2, corollary-to-i3");
}

ProofScript builtin_script(std::string_view name) {
  return parse_script(builtin_script_text(name));
}

AuditResult semantic_audit(const ProofScript& script,
                           std::span<const CayleyTable> tables) {
  std::vector<IdentityChecker> given;
  for (const auto& name : script.given) given.emplace_back(builtin(name));
  for (std::size_t k = 0; k < tables.size(); ++k) {
    for (std::size_t g = 0; g < given.size(); ++g) {
      if (!given[g].holds(tables[k])) {
        throw AuditPrecondition("table " + std::to_string(k) + " fails given identity " +
                                script.given[g]);
      }
    }
  }
  AuditResult result;
  Term prev = script.start;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const IdentityChecker pair(Identity(prev, script.steps[i].to));
    for (std::size_t k = 0; k < tables.size(); ++k) {
      if (auto ce = pair.check(tables[k])) {
        return AuditResult{false, i, k, std::move(ce)};
      }
    }
    prev = script.steps[i].to;
  }
  return result;
}

}  // namespace trimedial
