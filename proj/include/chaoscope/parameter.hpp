#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chaoscope {

/// Declared arithmetic class of a parameter value. A double cannot tell a
/// rational from an irrational, so families that branch on the class read
/// the tag, never the numeric value.
enum class ArithmeticClass { rational, algebraic_irrational, transcendental, untagged };

std::string_view to_string(ArithmeticClass c);

struct RationalTag {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const RationalTag&, const RationalTag&) = default;
};

struct AlgebraicTag {
  int degree = 2;
  friend bool operator==(const AlgebraicTag&, const AlgebraicTag&) = default;
};

struct TranscendentalTag {
  friend bool operator==(const TranscendentalTag&, const TranscendentalTag&) = default;
};

struct UntaggedTag {
  friend bool operator==(const UntaggedTag&, const UntaggedTag&) = default;
};

using ParameterTag = std::variant<RationalTag, AlgebraicTag, TranscendentalTag, UntaggedTag>;

/// A point of the parameter space Omega: a finite real plus its declared
/// arithmetic class. Immutable after construction.
class Parameter {
 public:
  /// p/q reduced to lowest terms with q > 0. Throws PreconditionError on q == 0.
  static Parameter rational(std::int64_t p, std::int64_t q);
  /// Algebraic irrational of minimal-polynomial degree >= 2.
  static Parameter algebraic(int degree, double value);
  static Parameter transcendental(double value);
  static Parameter untagged(double value);

  /// Exact rational tag for a double whose binary expansion fits in
  /// int64 numerator / power-of-two denominator; falls back to untagged.
  static Parameter exact_dyadic(double value);

  /// Parses the CLI literal forms: `0.25`, `3/4`, `alg:2:1.41421356`,
  /// `trans:3.14159`.
  static Parameter parse(std::string_view text);

  double value() const { return value_; }
  const ParameterTag& tag() const { return tag_; }
  ArithmeticClass arithmetic_class() const;
  bool is_rational() const { return arithmetic_class() == ArithmeticClass::rational; }
  bool is_tagged() const { return arithmetic_class() != ArithmeticClass::untagged; }

  /// Canonical byte string: class byte followed by the tag payload and the
  /// IEEE-754 bits of the value. Equal parameters give equal bytes.
  std::vector<std::uint8_t> canonical_bytes() const;

  /// Inverse of parse().
  std::string to_literal() const;

  friend bool operator==(const Parameter& a, const Parameter& b);

 private:
  Parameter(double value, ParameterTag tag) : value_(value), tag_(tag) {}

  double value_;
  ParameterTag tag_;
};

}  // namespace chaoscope
