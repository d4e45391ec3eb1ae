#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trimedial/magma.hpp"
#include "trimedial/term.hpp"

namespace trimedial {

enum class Direction { forward, reverse };
enum class Side { left, right };

// One rewrite "= to by rule". Absent hints are searched for; present ones
// must be honored exactly.
struct ProofStep {
  Term to;
  std::string by;
  std::optional<Direction> direction;
  std::optional<Path> at;
  std::optional<Substitution> with;
};

struct ProofScript {
  std::vector<std::string> given;
  Term start;
  std::vector<ProofStep> steps;
  std::optional<Side> cancellation;
  Identity conclusion;
};

struct Justification {
  Direction direction = Direction::forward;
  Path path;
  Substitution substitution;

  friend bool operator==(const Justification&, const Justification&) = default;
};

using RuleSet = std::map<std::string, Identity, std::less<>>;

// Registry identities named by `given`.
RuleSet rules_for(std::span<const std::string> given);

class UnknownRule : public std::invalid_argument {
 public:
  explicit UnknownRule(const std::string& name);
};

class NoJustification : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Extends `theta` so that substitute(pattern, theta) == term. Repeated
// variables must match equal subterms. Leaves `theta` unspecified on failure.
bool match(const Term& pattern, const Term& term, Substitution& theta);

// Searches paths in pre-order and, at each path, forward before reverse;
// returns the first rewrite that turns `from` into step.to.
Justification check_step(const Term& from, const ProofStep& step,
                         const RuleSet& rules);

class CancelError : public std::runtime_error {
 public:
  enum class Kind { shape, mismatch };
  CancelError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Syntactic cancellation of a shared left or right factor.
Identity cancel(const Term& lhs, const Term& rhs, Side side);

// Equal up to one bijective variable renaming applied to both sides.
bool alpha_equal(const Identity& a, const Identity& b);

struct Verdict {
  enum class Stage { none, step, unknown_rule, cancellation, conclusion };

  bool valid = false;
  Stage stage = Stage::none;
  // 1-based index of the failing step when stage is step or unknown_rule.
  std::size_t step = 0;
  std::string reason;
  std::vector<Justification> justifications;
  // Identity(start, final term), cancelled when the script cancels.
  std::optional<Identity> derived;
};

Verdict check_script(const ProofScript& script);

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Line-oriented format:
//   given <name>
//   start <term>
//   = <term> by <name> [fwd|rev] [at <path>] [with v=<term>,...]
//   cancel left|right
//   qed <identity>
// Blank lines and lines starting with '#' are ignored.
ProofScript parse_script(std::string_view text);
std::string render_script(const ProofScript& script);

// "= <to> by <rule> fwd|rev at <path> with v=<term>,..."
std::string render_step(const Term& to, const std::string& by,
                        const Justification& j);

inline constexpr std::string_view kBuiltinScripts[] = {
    "theorem", "corollary-to-i2", "corollary-to-i3"};

std::string_view builtin_script_text(std::string_view name);
ProofScript builtin_script(std::string_view name);

class AuditPrecondition : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AuditResult {
  bool passed = true;
  // On failure: index of the failing consecutive pair (0 = start vs first
  // step), the table index and the separating assignment.
  std::size_t pair = 0;
  std::size_t table = 0;
  std::optional<Counterexample> counterexample;
};

// Model-level cross-check: consecutive terms of the chain must agree under
// every assignment in every table. Throws AuditPrecondition when a table
// fails one of the script's given identities.
AuditResult semantic_audit(const ProofScript& script,
                           std::span<const CayleyTable> tables);

}  // namespace trimedial
