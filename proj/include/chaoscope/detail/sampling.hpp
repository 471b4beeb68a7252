#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace chaoscope::detail {

inline double frac(double v) { return v - std::floor(v); }

// splitmix64 finaliser.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) derived from (seed, stream).
inline double unit_hash(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t h = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (stream * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr double kInvGolden = 0.6180339887498949;

// R2 low-discrepancy sequence in the unit square (generalised golden ratio
// in two dimensions), shifted by a seeded offset.
class R2 {
 public:
  R2(std::uint64_t seed, std::uint64_t stream)
      : s1_(unit_hash(seed, 2 * stream)), s2_(unit_hash(seed, 2 * stream + 1)) {}

  std::pair<double, double> at(std::int64_t i) const {
    constexpr double g = 1.3247179572447460;  // plastic number
    const double n = static_cast<double>(i + 1);
    return {frac(s1_ + n / g), frac(s2_ + n / (g * g))};
  }

 private:
  double s1_;
  double s2_;
};

}  // namespace chaoscope::detail
