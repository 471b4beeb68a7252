#include "chaoscope/parameter.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <numeric>

#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw PreconditionError("parameter value must be finite");
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T out{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace

std::string_view to_string(ArithmeticClass c) {
  switch (c) {
    case ArithmeticClass::rational: return "rational";
    case ArithmeticClass::algebraic_irrational: return "algebraic_irrational";
    case ArithmeticClass::transcendental: return "transcendental";
    case ArithmeticClass::untagged: return "untagged";
  }
  return "untagged";
}

Parameter Parameter::rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw PreconditionError("rational parameter with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  if (g > 1) {
    p /= g;
    q /= g;
  }
  return Parameter(static_cast<double>(p) / static_cast<double>(q), RationalTag{p, q});
}

Parameter Parameter::algebraic(int degree, double value) {
  if (degree < 2) throw PreconditionError("algebraic irrational degree must be >= 2");
  require_finite(value);
  return Parameter(value, AlgebraicTag{degree});
}

Parameter Parameter::transcendental(double value) {
  require_finite(value);
  return Parameter(value, TranscendentalTag{});
}

Parameter Parameter::untagged(double value) {
  require_finite(value);
  return Parameter(value, UntaggedTag{});
}

Parameter Parameter::exact_dyadic(double value) {
  require_finite(value);
  if (value == 0.0) return rational(0, 1);
  int exp = 0;
  double mant = std::frexp(value, &exp);  // value = mant * 2^exp, 0.5 <= |mant| < 1
  // Scale the 53-bit mantissa to an integer; shift out trailing zero bits.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  int e = exp - 53;
  while (m % 2 == 0 && e < 0) {
    m /= 2;
    ++e;
  }
  if (e >= 0) {
    if (e > 9 || std::abs(m) > (std::int64_t{1} << (62 - e))) return untagged(value);
    return rational(m << e, 1);
  }
  if (-e > 62) return untagged(value);
  return rational(m, std::int64_t{1} << (-e));
}

Parameter Parameter::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty parameter literal");
  if (text.rfind("alg:", 0) == 0) {
    auto rest = text.substr(4);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected alg:<degree>:<value>");
    int degree = parse_number<int>(rest.substr(0, colon), "algebraic degree");
    double v = parse_number<double>(rest.substr(colon + 1), "algebraic value");
    return algebraic(degree, v);
  }
  if (text.rfind("trans:", 0) == 0) {
    return transcendental(parse_number<double>(text.substr(6), "transcendental value"));
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto p = parse_number<std::int64_t>(text.substr(0, slash), "rational numerator");
    auto q = parse_number<std::int64_t>(text.substr(slash + 1), "rational denominator");
    return rational(p, q);
  }
  return untagged(parse_number<double>(text, "parameter value"));
}

ArithmeticClass Parameter::arithmetic_class() const {
  return std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RationalTag>) return ArithmeticClass::rational;
        if constexpr (std::is_same_v<T, AlgebraicTag>) return ArithmeticClass::algebraic_irrational;
        if constexpr (std::is_same_v<T, TranscendentalTag>) return ArithmeticClass::transcendental;
        if constexpr (std::is_same_v<T, UntaggedTag>) return ArithmeticClass::untagged;
      },
      tag_);
}

std::vector<std::uint8_t> Parameter::canonical_bytes() const {
  std::vector<std::uint8_t> out;
  auto push64 = [&out](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  out.push_back(static_cast<std::uint8_t>(arithmetic_class()));
  if (const auto* r = std::get_if<RationalTag>(&tag_)) {
    push64(static_cast<std::uint64_t>(r->num));
    push64(static_cast<std::uint64_t>(r->den));
  } else if (const auto* a = std::get_if<AlgebraicTag>(&tag_)) {
    push64(static_cast<std::uint64_t>(a->degree));
  }
  // -0.0 and 0.0 hash alike.
  const double v = value_ == 0.0 ? 0.0 : value_;
  push64(std::bit_cast<std::uint64_t>(v));
  return out;
}

std::string Parameter::to_literal() const {
  if (const auto* r = std::get_if<RationalTag>(&tag_)) {
    return std::to_string(r->num) + "/" + std::to_string(r->den);
  }
  if (const auto* a = std::get_if<AlgebraicTag>(&tag_)) {
    return "alg:" + std::to_string(a->degree) + ":" + format_double(value_);
  }
  if (std::holds_alternative<TranscendentalTag>(tag_)) return "trans:" + format_double(value_);
  return format_double(value_);
}

bool operator==(const Parameter& a, const Parameter& b) {
  return std::bit_cast<std::uint64_t>(a.value_) == std::bit_cast<std::uint64_t>(b.value_) &&
         a.tag_ == b.tag_;
}

}  // namespace chaoscope
