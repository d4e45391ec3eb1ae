#include "trimedial/term.hpp"

#include <algorithm>

namespace trimedial {

Term Term::var(char name) {
  if (name < 'a' || name > 'z') {
    throw std::invalid_argument(std::string("variable must be a-z, got '") +
                                name + "'");
  }
  auto node = std::make_shared<Node>();
  node->name = name;
  return Term(std::move(node));
}

Term Term::prod(Term left, Term right) {
  auto node = std::make_shared<Node>();
  node->size = 1 + left.size() + right.size();
  node->depth = 1 + std::max(left.depth(), right.depth());
  node->left = std::move(left.node_);
  node->right = std::move(right.node_);
  return Term(std::move(node));
}

void Term::collect_vars(std::set<char>& out) const {
  if (is_var()) {
    out.insert(name());
    return;
  }
  left().collect_vars(out);
  right().collect_vars(out);
}

std::set<char> Term::vars() const {
  std::set<char> out;
  collect_vars(out);
  return out;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->name != b.node_->name || a.size() != b.size()) return false;
  if (a.is_var()) return true;
  return a.left() == b.left() && a.right() == b.right();
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_var() != b.is_var()) {
    return a.is_var() ? std::strong_ordering::less
                      : std::strong_ordering::greater;
  }
  if (a.is_var()) return a.name() <=> b.name();
  if (auto c = a.left() <=> b.left(); c != 0) return c;
  return a.right() <=> b.right();
}

std::string render_path(const Path& p) {
  if (p.empty()) return ".";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += p[i] == Dir::L ? 'L' : 'R';
  }
  return out;
}

Path parse_path(std::string_view text) {
  Path p;
  if (text == ".") return p;
  bool expect_dir = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (expect_dir && (c == 'L' || c == 'R')) {
      p.push_back(c == 'L' ? Dir::L : Dir::R);
    } else if (!expect_dir && c == '.') {
    } else {
      throw ParseError("malformed path '" + std::string(text) + "'", i);
    }
    expect_dir = !expect_dir;
  }
  if (expect_dir) {
    throw ParseError("malformed path '" + std::string(text) + "'",
                     text.size());
  }
  return p;
}

namespace {

std::vector<char> sorted_union(const Term& a, const Term& b) {
  std::set<char> s;
  a.collect_vars(s);
  b.collect_vars(s);
  return {s.begin(), s.end()};
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term term() {
    Term t = factor();
    while (peek() == '*') {
      ++pos_;
      char next = peek();
      if (next == '\0' || next == '=' || next == ')' || next == '*') {
        fail("dangling '*'");
      }
      t = Term::prod(std::move(t), factor());
    }
    return t;
  }

  char peek() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    char got = peek();
    if (got != c) {
      if (got == '\0') fail(std::string("expected '") + c + "' at end of input");
      fail(std::string("expected '") + c + "', found '" + got + "'");
    }
    ++pos_;
  }

  bool at_end() { return peek() == '\0'; }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

 private:
  Term factor() {
    char c = peek();
    if (c >= 'a' && c <= 'z') {
      ++pos_;
      return Term::var(c);
    }
    if (c == '(') {
      ++pos_;
      if (peek() == ')') fail("empty parentheses");
      Term t = term();
      if (peek() != ')') {
        if (at_end()) fail("unbalanced parenthesis");
        fail(std::string("expected ')', found '") + peek() + "'");
      }
      ++pos_;
      return t;
    }
    if (c == '\0') fail("expected a term at end of input");
    if (c == '*') fail("dangling '*'");
    if (c == '=' || c == ')') fail(std::string("expected a term before '") + c + "'");
    fail(std::string("illegal character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what), position_(position) {}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  if (!p.at_end()) {
    char c = p.peek();
    if (c == ')') p.fail("unbalanced parenthesis");
    p.fail(std::string("unexpected '") + c + "'");
  }
  return t;
}

Identity parse_identity(std::string_view text) {
  Parser p(text);
  Term lhs = p.term();
  p.expect('=');
  Term rhs = p.term();
  if (!p.at_end()) {
    char c = p.peek();
    if (c == ')') p.fail("unbalanced parenthesis");
    p.fail(std::string("unexpected '") + c + "'");
  }
  return Identity(std::move(lhs), std::move(rhs));
}

Identity::Identity(Term lhs, Term rhs)
    : lhs_(std::move(lhs)), rhs_(std::move(rhs)), vars_(sorted_union(lhs_, rhs_)) {}

namespace {
void render_into(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += t.name();
    return;
  }
  out += '(';
  render_into(t.left(), out);
  out += '*';
  render_into(t.right(), out);
  out += ')';
}
}  // namespace

std::string render(const Term& t) {
  std::string out;
  out.reserve(t.size() * 2);
  render_into(t, out);
  return out;
}

std::string render(const Identity& id) {
  return render(id.lhs()) + " = " + render(id.rhs());
}

Term substitute(const Term& t, const Substitution& s) {
  if (s.empty()) return t;
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  return Term::prod(substitute(t.left(), s), substitute(t.right(), s));
}

Identity substitute(const Identity& id, const Substitution& s) {
  return Identity(substitute(id.lhs(), s), substitute(id.rhs(), s));
}

Term subterm_at(const Term& t, const Path& p) {
  Term cur = t;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (cur.is_var()) {
      Path prefix(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i));
      throw InvalidPath("path " + render_path(p) + " walks past variable '" +
                        cur.name() + "' at " + render_path(prefix));
    }
    cur = p[i] == Dir::L ? cur.left() : cur.right();
  }
  return cur;
}

namespace {
Term replace_from(const Term& t, const Path& p, std::size_t i,
                  const Term& replacement) {
  if (i == p.size()) return replacement;
  if (t.is_var()) {
    throw InvalidPath("path " + render_path(p) + " walks past variable '" +
                      t.name() + "'");
  }
  if (p[i] == Dir::L) {
    return Term::prod(replace_from(t.left(), p, i + 1, replacement), t.right());
  }
  return Term::prod(t.left(), replace_from(t.right(), p, i + 1, replacement));
}

void preorder_into(const Term& t, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  if (t.is_var()) return;
  cur.push_back(Dir::L);
  preorder_into(t.left(), cur, out);
  cur.back() = Dir::R;
  preorder_into(t.right(), cur, out);
  cur.pop_back();
}
}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& replacement) {
  return replace_from(t, p, 0, replacement);
}

std::vector<Path> preorder_paths(const Term& t) {
  std::vector<Path> out;
  Path cur;
  preorder_into(t, cur, out);
  return out;
}

}  // namespace trimedial
