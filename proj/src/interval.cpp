#include "chaoscope/interval.hpp"

#include <charconv>
#include <cmath>

#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

namespace {

RealInterval make(double lo, double hi, bool lo_open, bool hi_open) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw PreconditionError("interval requires lo < hi, got [" + format_double(lo) + ", " +
                            format_double(hi) + "]");
  }
  // Infinite ends are never attained.
  return {lo, hi, lo_open || std::isinf(lo), hi_open || std::isinf(hi)};
}

double parse_end(std::string_view s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad interval endpoint '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

RealInterval RealInterval::closed(double lo, double hi) { return make(lo, hi, false, false); }
RealInterval RealInterval::open(double lo, double hi) { return make(lo, hi, true, true); }
RealInterval RealInterval::left_open(double lo, double hi) { return make(lo, hi, true, false); }
RealInterval RealInterval::right_open(double lo, double hi) { return make(lo, hi, false, true); }
RealInterval RealInterval::real_line() { return make(-kInf, kInf, true, true); }

RealInterval RealInterval::parse(std::string_view text) {
  // Split on the colon that separates the ends; a leading '-' never
  // contains ':' so the first colon is the separator.
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("expected lo:hi, got '" + std::string(text) + "'");
  return make(parse_end(text.substr(0, colon)), parse_end(text.substr(colon + 1)), false, false);
}

bool RealInterval::is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

bool RealInterval::contains(double x) const {
  if (std::isnan(x)) return false;
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

bool RealInterval::contains(const RealInterval& inner) const {
  const bool lo_ok = inner.lo > lo || (inner.lo == lo && (!lo_open || inner.lo_open));
  const bool hi_ok = inner.hi < hi || (inner.hi == hi && (!hi_open || inner.hi_open));
  return lo_ok && hi_ok;
}

std::string RealInterval::to_string() const {
  return std::string(lo_open ? "(" : "[") + format_double(lo) + ", " + format_double(hi) +
         (hi_open ? ")" : "]");
}

}  // namespace chaoscope
