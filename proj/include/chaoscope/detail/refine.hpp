#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace chaoscope::detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Bisection on a bracket with f(lo), f(hi) of opposite sign. Runs at most
/// `iters` halvings and stops early once the bracket cannot shrink further.
/// Returns the end of the final bracket with the smaller |f|.
template <typename F>
double bisect(F&& f, double lo, double hi, double flo, double fhi, int iters) {
  for (int i = 0; i < iters; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Golden-section minimisation of f on [lo, hi]. Returns (argmin, min).
/// With probe_ends the result is never worse than the better endpoint;
/// without, f is only evaluated strictly inside (lo, hi).
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, int iters, bool probe_ends = true) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iters && c < d; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  std::pair<double, double> best = fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
  if (!probe_ends) return best;
  const double flo = f(lo);
  if (flo < best.second) best = {lo, flo};
  const double fhi = f(hi);
  if (fhi < best.second) best = {hi, fhi};
  return best;
}

struct RootHit {
  double z = 0.0;
  bool tangential = false;
};

/// Roots of f from samples f_i = f(z_i) on an ascending grid: every sign
/// change is bisected, and every sampled closest approach to zero that does
/// not change sign is re-examined with golden-section search so that pairs
/// of roots inside one grid cell, and touching zeros with |f| <= touch_tol,
/// are not lost.
template <typename F>
std::vector<RootHit> refined_roots(std::span<const double> z, std::span<const double> fz, F&& f, int iters,
                                   double touch_tol) {
  std::vector<RootHit> out;
  const std::size_t n = z.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int si = sign_of(fz[i]);
    if (si == 0) {
      const bool crosses = i == 0 || i + 1 == n || sign_of(fz[i - 1]) != sign_of(fz[i + 1]);
      out.push_back({z[i], !crosses});
      continue;
    }
    if (i + 1 < n && si * sign_of(fz[i + 1]) < 0) {
      out.push_back({bisect(f, z[i], z[i + 1], fz[i], fz[i + 1], iters), false});
    }
    if (i == 0 || i + 1 >= n) continue;
    if (sign_of(fz[i - 1]) != si || sign_of(fz[i + 1]) != si) continue;
    const double ai = std::abs(fz[i]);
    if (!(ai < std::abs(fz[i - 1]) && ai <= std::abs(fz[i + 1]))) continue;
    auto toward_zero = [&](double t) { return si * f(t); };
    auto [zm, fm] = golden_min(toward_zero, z[i - 1], z[i + 1], iters);
    if (fm < 0.0) {
      const double fmid = si * fm;
      out.push_back({bisect(f, z[i - 1], zm, fz[i - 1], fmid, iters), false});
      out.push_back({bisect(f, zm, z[i + 1], fmid, fz[i + 1], iters), false});
    } else if (fm <= touch_tol) {
      out.push_back({zm, true});
    }
  }
  std::sort(out.begin(), out.end(), [](const RootHit& a, const RootHit& b) { return a.z < b.z; });
  out.erase(std::unique(out.begin(), out.end(), [](const RootHit& a, const RootHit& b) { return a.z == b.z; }),
            out.end());
  return out;
}

}  // namespace chaoscope::detail
