#include "chaoscope/expression.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

enum class Op { add, sub, mul, div, pow, neg, sin, cos, ln, exp, abs };

struct Expression::Node {
  enum class Kind { constant, var_a, var_x, unary, binary } kind = Kind::constant;
  double value = 0.0;
  Op op = Op::add;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

NodePtr variable(Node::Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

NodePtr unary(Op op, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::unary;
  n->op = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "': " + what + " at offset " +
                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // Consumes one operator symbol (ASCII or its Unicode spelling).
  bool accept(char ascii) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ascii) {
      ++pos_;
      return true;
    }
    std::string_view alt;
    switch (ascii) {
      case '*': alt = "\xC3\x97"; break;
      case '/': alt = "\xC3\xB7"; break;
      case '-': alt = "\xE2\x88\x92"; break;
      default: return false;
    }
    if (text_.substr(pos_, alt.size()) == alt) {
      pos_ += alt.size();
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Op::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary_expr();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::mul, lhs, unary_expr());
      } else if (accept('/')) {
        lhs = binary(Op::div, lhs, unary_expr());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary_expr() {
    if (accept('-')) return unary(Op::neg, unary_expr());
    if (accept('+')) return unary_expr();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary(Op::pow, base, unary_expr());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      auto inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view word = text_.substr(start, pos_ - start);
      if (word == "a") return variable(Node::Kind::var_a);
      if (word == "x" || word == "n") return variable(Node::Kind::var_x);
      if (word == "pi") return constant(std::numbers::pi);
      if (word == "e") return constant(std::numbers::e);
      Op op;
      if (word == "sin") {
        op = Op::sin;
      } else if (word == "cos") {
        op = Op::cos;
      } else if (word == "ln") {
        op = Op::ln;
      } else if (word == "exp") {
        op = Op::exp;
      } else if (word == "abs") {
        op = Op::abs;
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(word) + "'");
      }
      if (!accept('(')) fail("expected '(' after " + std::string(word));
      auto arg = expr();
      if (!accept(')')) fail("expected ')'");
      return unary(op, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return constant(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double a, double x) {
  switch (n.kind) {
    case Node::Kind::constant: return n.value;
    case Node::Kind::var_a: return a;
    case Node::Kind::var_x: return x;
    case Node::Kind::unary: {
      const double v = eval_node(*n.lhs, a, x);
      switch (n.op) {
        case Op::neg: return -v;
        case Op::sin: return std::sin(v);
        case Op::cos: return std::cos(v);
        case Op::exp: return std::exp(v);
        case Op::abs: return std::abs(v);
        case Op::ln:
          if (!(v > 0.0)) throw SingularMoment("ln of non-positive value " + format_double(v));
          return std::log(v);
        default: break;
      }
      break;
    }
    case Node::Kind::binary: {
      const double l = eval_node(*n.lhs, a, x);
      const double r = eval_node(*n.rhs, a, x);
      switch (n.op) {
        case Op::add: return l + r;
        case Op::sub: return l - r;
        case Op::mul: return l * r;
        case Op::div:
          if (r == 0.0) throw SingularMoment("division by zero");
          return l / r;
        case Op::pow: return std::pow(l, r);
        default: break;
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text);
  return Expression(std::string(text), p.parse());
}

double Expression::evaluate(double a, double x) const {
  const double v = eval_node(*root_, a, x);
  if (!std::isfinite(v)) {
    throw SingularMoment("'" + text_ + "' is not finite at a = " + format_double(a) + ", x = " + format_double(x));
  }
  return v;
}

FamilySpec make_expression_family(const std::string& id, const Expression& expr, RealInterval omega,
                                  RealInterval theta) {
  FamilySpec s;
  s.id = id;
  s.omega = omega;
  s.theta = theta;
  s.evaluator = [expr](const Parameter& a, double x) { return expr.evaluate(a.value(), x); };
  s.notes = "user expression: " + expr.text();
  s.sample_omega = omega.is_finite() ? RealInterval::closed(omega.lo, omega.hi) : RealInterval::closed(0.5, 2.5);
  if (theta.is_finite() && !theta.lo_open && !theta.hi_open) s.default_range = theta;
  return s;
}

}  // namespace chaoscope
