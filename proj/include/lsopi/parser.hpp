/**
 * @file parser.hpp
 * @brief Expression parser producing an unnormalized tree.
 *
 * Grammar: integers, variable names, + - * / ^ (integer exponent) and
 * parentheses. Normalization is a separate step so a syntactically valid
 * input such as "x1/(x1-x1)" parses and is rejected only when normalized.
 */
#ifndef LSOPI_PARSER_HPP
#define LSOPI_PARSER_HPP

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lsopi/expr.hpp"

namespace lsopi {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t col)
      : std::runtime_error(msg + " at column " + std::to_string(col + 1)), column(col) {}
  std::size_t column;
};

class ExprTree {
 public:
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow };

  struct Node {
    Kind kind;
    mpz_class number;
    std::size_t var = 0;
    long exponent = 0;
    std::shared_ptr<const Node> lhs, rhs;
  };

  ExprTree() = default;
  explicit ExprTree(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  const Node& root() const { return *root_; }
  bool empty() const { return !root_; }

 private:
  std::shared_ptr<const Node> root_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  ExprTree run() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return ExprTree(n);
  }

 private:
  using NodeP = std::shared_ptr<const ExprTree::Node>;

  static NodeP make(ExprTree::Kind k, NodeP l = nullptr, NodeP r = nullptr) {
    auto n = std::make_shared<ExprTree::Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodeP expr() {
    NodeP lhs = term();
    while (true) {
      if (accept('+')) lhs = make(ExprTree::Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(ExprTree::Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodeP term() {
    NodeP lhs = factor();
    while (true) {
      if (accept('*')) lhs = make(ExprTree::Kind::Mul, lhs, factor());
      else if (accept('/')) lhs = make(ExprTree::Kind::Div, lhs, factor());
      else return lhs;
    }
  }

  NodeP factor() {
    if (accept('-')) return make(ExprTree::Kind::Neg, factor());
    if (accept('+')) return factor();
    NodeP base = atom();
    if (accept('^')) {
      skip();
      bool neg = false;
      if (accept('-')) neg = true;
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent", pos_);
      std::string digits(s_.substr(start, pos_ - start));
      if (digits.size() > 6) throw ParseError("exponent too large", start);
      auto n = std::make_shared<ExprTree::Node>();
      n->kind = ExprTree::Kind::Pow;
      n->lhs = base;
      n->exponent = std::stol(digits) * (neg ? -1 : 1);
      return n;
    }
    return base;
  }

  NodeP atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodeP inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto n = std::make_shared<ExprTree::Node>();
      n->kind = ExprTree::Kind::Number;
      n->number = mpz_class(std::string(s_.substr(start, pos_ - start)));
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i] == name) {
          auto n = std::make_shared<ExprTree::Node>();
          n->kind = ExprTree::Kind::Variable;
          n->var = i;
          return n;
        }
      }
      throw ParseError("unknown variable '" + name + "'", start);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline Expr normalize_node(const ExprTree::Node& n) {
  using K = ExprTree::Kind;
  switch (n.kind) {
    case K::Number: return Expr(mpq_class(n.number));
    case K::Variable: return Expr::variable(n.var);
    case K::Neg: return -normalize_node(*n.lhs);
    case K::Add: return normalize_node(*n.lhs) + normalize_node(*n.rhs);
    case K::Sub: return normalize_node(*n.lhs) - normalize_node(*n.rhs);
    case K::Mul: return normalize_node(*n.lhs) * normalize_node(*n.rhs);
    case K::Div: {
      Expr d = normalize_node(*n.rhs);
      if (d.is_zero()) throw ZeroDenominator();
      return normalize_node(*n.lhs) / d;
    }
    case K::Pow: {
      Expr b = normalize_node(*n.lhs);
      if (b.is_zero() && n.exponent < 0) throw ZeroDenominator();
      return b.pow(n.exponent);
    }
  }
  throw AlgebraError("corrupt expression tree");
}

}  // namespace detail

/// Parses text over the given variable names; throws ParseError.
inline ExprTree parse_expr(std::string_view text, const std::vector<std::string>& vars) {
  return detail::Parser(text, vars).run();
}

/// Canonical form of a parsed tree; throws ZeroDenominator.
inline Expr normalize(const ExprTree& tree) {
  if (tree.empty()) return Expr();
  return detail::normalize_node(tree.root());
}

inline Expr normalize(const Expr& e) { return e; }

/// Parse and normalize in one step.
inline Expr parse_normalized(std::string_view text, const std::vector<std::string>& vars) {
  return normalize(parse_expr(text, vars));
}

}  // namespace lsopi

#endif  // LSOPI_PARSER_HPP
