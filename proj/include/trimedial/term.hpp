#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trimedial {

// A term over a single binary operation. Leaves are single-letter variables
// a-z. Nodes are immutable and shared, so copies are cheap and thread-safe.
class Term {
 public:
  static Term var(char name);
  static Term prod(Term left, Term right);

  bool is_var() const { return node_->name != 0; }
  bool is_prod() const { return node_->name == 0; }

  // Precondition: is_var().
  char name() const { return node_->name; }
  // Precondition: is_prod().
  Term left() const { return Term(node_->left); }
  Term right() const { return Term(node_->right); }

  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  // Adds every leaf name to `out`.
  void collect_vars(std::set<char>& out) const;
  std::set<char> vars() const;

  friend bool operator==(const Term& a, const Term& b);

  // Structural total order. Unrelated to printing; only used for containers.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    char name = 0;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t size = 1;
    std::size_t depth = 0;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

enum class Dir : unsigned char { L, R };
using Path = std::vector<Dir>;

// "." for the root, otherwise L/R letters joined by dots ("R.L").
std::string render_path(const Path& p);
Path parse_path(std::string_view text);

class Identity {
 public:
  Identity(Term lhs, Term rhs);

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  // Sorted union of the leaf names on both sides.
  const std::vector<char>& vars() const { return vars_; }

  friend bool operator==(const Identity& a, const Identity& b) {
    return a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_;
  }

 private:
  Term lhs_;
  Term rhs_;
  std::vector<char> vars_;
};

using Substitution = std::map<char, Term>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  // Zero-based offset into the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class InvalidPath : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Grammar:
//   identity := term "=" term
//   term     := factor ("*" factor)*      -- left associative
//   factor   := variable | "(" term ")"
// Whitespace is ignored everywhere.
Term parse_term(std::string_view text);
Identity parse_identity(std::string_view text);

// Fully parenthesized: every product prints as "(" left "*" right ")".
std::string render(const Term& t);
std::string render(const Identity& id);

// Simultaneous replacement; inserted terms are not substituted again.
Term substitute(const Term& t, const Substitution& s);
Identity substitute(const Identity& id, const Substitution& s);

Term subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

// Every valid path of `t` in pre-order (root, left subtree, right subtree).
std::vector<Path> preorder_paths(const Term& t);

}  // namespace trimedial
