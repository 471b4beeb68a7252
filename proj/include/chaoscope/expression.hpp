#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "chaoscope/families.hpp"

namespace chaoscope {

/// Expression over the variables `a` (parameter) and `x` (moment; `n` is an
/// alias used for sequence families).
///
/// Grammar (infix operators, prefix function calls):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?            right associative
///     primary := number | 'a' | 'x' | 'n' | 'pi' | 'e'
///              | func '(' expr ')' | '(' expr ')'
///     func    := sin | cos | ln | exp | abs
///
/// The symbols × (U+00D7), ÷ (U+00F7) and − (U+2212) are accepted for
/// '*', '/' and '-'.
class Expression {
 public:
  static Expression parse(std::string_view text);

  /// Throws SingularMoment on ln of a non-positive value, division by
  /// zero, or a non-finite result.
  double evaluate(double a, double x) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  Expression(std::string text, std::shared_ptr<const Node> root)
      : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Wraps an expression as a FamilySpec. The sampling region defaults to
/// omega when omega is finite and to [0.5, 2.5] otherwise.
FamilySpec make_expression_family(const std::string& id, const Expression& expr, RealInterval omega,
                                  RealInterval theta);

}  // namespace chaoscope
