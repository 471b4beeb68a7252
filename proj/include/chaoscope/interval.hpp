#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace chaoscope {

/// Real interval with per-end openness. Either end may be infinite (and is
/// then open); scan ranges are always finite.
struct RealInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_open = false;
  bool hi_open = false;

  static RealInterval closed(double lo, double hi);
  static RealInterval open(double lo, double hi);
  static RealInterval left_open(double lo, double hi);   // (lo, hi]
  static RealInterval right_open(double lo, double hi);  // [lo, hi)
  static RealInterval real_line();

  /// Parses `lo:hi` (closed). `inf` / `-inf` are accepted and make that
  /// end open.
  static RealInterval parse(std::string_view text);

  bool is_finite() const;
  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(double x) const;
  /// True if every point of `inner` lies in *this.
  bool contains(const RealInterval& inner) const;

  std::string to_string() const;

  friend bool operator==(const RealInterval&, const RealInterval&) = default;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace chaoscope
