#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "chaoscope/errors.hpp"
#include "chaoscope/expression.hpp"
#include "chaoscope/window_scanner.hpp"

using namespace chaoscope;

namespace {

const double pi = std::numbers::pi;

// Oracle: zeros of d by sign changes on a dense grid plus plain bisection,
// and for each pair of consecutive zeros the dense-grid max of |d|.
struct DenseZeros {
  std::vector<double> zeros;
  std::vector<double> max_between;
};

template <class F>
DenseZeros dense_zeros(F d, double lo, double hi, int n) {
  DenseZeros out;
  double prev_t = lo, prev = d(lo);
  double run_max = 0.0;
  for (int i = 1; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    const double v = d(t);
    if (prev == 0.0 || prev * v < 0.0) {
      double a = prev_t, b = t;
      if (prev != 0.0) {
        for (int k = 0; k < 200 && b - a > 0; ++k) {
          const double m = 0.5 * (a + b);
          if ((d(m) < 0) == (d(a) < 0)) a = m; else b = m;
        }
      }
      if (!out.zeros.empty()) out.max_between.push_back(run_max);
      out.zeros.push_back(prev == 0.0 ? prev_t : 0.5 * (a + b));
      run_max = 0.0;
    }
    run_max = std::max(run_max, std::abs(v));
    prev_t = t;
    prev = v;
  }
  return out;
}

ScanConfig small_grid(std::int64_t n = 20000) {
  ScanConfig c = default_config();
  c.grid_points = n;
  return c;
}

}  // namespace

TEST_CASE("sin x vs sin 2x crossings are pi/3, pi, 5pi/3") {
  const auto spec = find_family("sin_ax");
  const auto xs = scan_crossings(spec, Parameter::rational(1, 1), Parameter::rational(2, 1),
                                 RealInterval::closed(0.1, 2 * pi - 0.1), default_config());
  REQUIRE(xs.size() == 3);
  CHECK(xs[0].z == doctest::Approx(pi / 3).epsilon(1e-12));
  CHECK(xs[1].z == doctest::Approx(pi).epsilon(1e-12));
  CHECK(xs[2].z == doctest::Approx(5 * pi / 3).epsilon(1e-12));
  for (const auto& c : xs) {
    CHECK_FALSE(c.tangential);
    CHECK(c.residual <= 1e-9);
  }
}

TEST_CASE("crossings agree with a dense-grid oracle") {
  const auto spec = find_family("sin_ax");
  const auto a = Parameter::untagged(1.0), b = Parameter::untagged(1.013);
  const RealInterval r = RealInterval::closed(0.5, 300.0);
  const auto xs = scan_crossings(spec, a, b, r, small_grid());
  const auto oracle = dense_zeros([&](double t) { return std::sin(t) - std::sin(1.013 * t); }, r.lo, r.hi, 400000);
  REQUIRE(xs.size() == oracle.zeros.size());
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(xs[i].z == doctest::Approx(oracle.zeros[i]).epsilon(1e-10));
}

TEST_CASE("cross windows agree with the oracle's zero-to-zero maxima") {
  const auto spec = find_family("sin_ax");
  const auto a = Parameter::untagged(1.0), b = Parameter::untagged(1.013);
  const RealInterval r = RealInterval::closed(0.5, 300.0);
  const double eps = 0.125;
  const auto ws = find_windows(spec, a, b, eps, WindowKind::cross, r, small_grid());
  const auto oracle = dense_zeros([&](double t) { return std::sin(t) - std::sin(1.013 * t); }, r.lo, r.hi, 400000);
  std::vector<std::pair<double, double>> want;
  for (std::size_t j = 0; j < oracle.max_between.size(); ++j) {
    // Skip maxima that sit within the oracle's own grid error of eps.
    if (std::abs(oracle.max_between[j] - eps) < 1e-4) continue;
    if (oracle.max_between[j] < eps) want.emplace_back(oracle.zeros[j], oracle.zeros[j + 1]);
  }
  REQUIRE(!want.empty());
  REQUIRE(ws.size() == want.size());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(ws[i].x1 == doctest::Approx(want[i].first).epsilon(1e-9));
    CHECK(ws[i].y1 == doctest::Approx(want[i].second).epsilon(1e-9));
    CHECK(ws[i].interior_max < eps);
    CHECK(ws[i].interior_min > 0.0);
  }
}

TEST_CASE("disjoint windows of a(2 + sin x) have closed-form ends") {
  // d = 0.2 (2 + sin x) never vanishes and dips under 0.3 exactly where sin x < -1/2.
  const auto spec = make_expression_family("offset", Expression::parse("a*(2 + sin(x))"), RealInterval::real_line(),
                                           RealInterval::real_line());
  const auto ws = find_windows(spec, Parameter::untagged(0.5), Parameter::untagged(0.3), 0.3, WindowKind::disjoint,
                               RealInterval::closed(0.0, 4 * pi), small_grid());
  REQUIRE(ws.size() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(ws[k].x1 == doctest::Approx(7 * pi / 6 + 2 * pi * k).epsilon(1e-9));
    CHECK(ws[k].y1 == doctest::Approx(11 * pi / 6 + 2 * pi * k).epsilon(1e-9));
    CHECK(ws[k].interior_min == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(std::abs(ws[k].boundary_x1 - 0.3) <= 1e-7);
  }
  CHECK(find_windows(spec, Parameter::untagged(0.5), Parameter::untagged(0.3), 0.3, WindowKind::cross,
                     RealInterval::closed(0.0, 4 * pi), small_grid())
            .empty());
}

TEST_CASE("a window that straddles a zero is not disjoint") {
  // d = 0.2 sin x: |d| < 0.1 around every zero, but those dips contain the zero.
  const auto spec = make_expression_family("s", Expression::parse("a*sin(x)"), RealInterval::real_line(),
                                           RealInterval::real_line());
  const auto ws = find_windows(spec, Parameter::untagged(0.5), Parameter::untagged(0.3), 0.1, WindowKind::disjoint,
                               RealInterval::closed(0.1, 10.0), small_grid());
  CHECK(ws.empty());
}

TEST_CASE("identical and flat pairs give nothing") {
  const auto spec = find_family("sin_ax");
  const auto a = Parameter::untagged(1.0);
  PairScan same(spec, a, a, RealInterval::closed(0, 10), small_grid());
  CHECK(same.identical_pair());
  CHECK(same.crossings().empty());
  CHECK(same.windows(WindowKind::cross, 0.5).empty());
  CHECK_THROWS_AS(scan_crossings(spec, a, a, RealInterval::closed(0, 10), small_grid()), PreconditionError);
  const auto flat = make_expression_family("flat", Expression::parse("0*a + 1"), RealInterval::closed(0, 1),
                                           RealInterval::closed(0, 1));
  PairScan f(flat, Parameter::untagged(0.2), Parameter::untagged(0.7), RealInterval::closed(0, 1), small_grid(100));
  CHECK(f.crossings().empty());
  CHECK(f.windows(WindowKind::disjoint, 0.5).empty());
}

TEST_CASE("scan preconditions") {
  const auto spec = find_family("log_sine");
  const auto a = Parameter::untagged(0.3), b = Parameter::untagged(0.4);
  CHECK_THROWS_AS(PairScan(spec, a, b, RealInterval::closed(0.0, 1.0), small_grid()), PreconditionError);
  CHECK_THROWS_AS(PairScan(spec, Parameter::untagged(2.0), b, RealInterval::closed(0.1, 1.0), small_grid()),
                  PreconditionError);
  PairScan ok(spec, a, b, RealInterval::closed(0.1, 1.0), small_grid(1000));
  CHECK_THROWS_AS(ok.windows(WindowKind::cross, 0.0), PreconditionError);
}

TEST_CASE("a full cross chain on sin_ax is independently valid") {
  // Rationally related pairs are periodic and run out of small windows; this
  // pair is not.
  const auto spec = find_family("sin_ax");
  const double av = 0.6607496415969933, bv = 1.7752292646728083;
  const auto a = Parameter::untagged(av), b = Parameter::untagged(bv);
  const ScanConfig cfg = default_config();
  const WindowChain chain = build_chain(spec, a, b, WindowKind::cross, RealInterval::closed(0, 500), cfg);
  REQUIRE(chain.succeeded());
  REQUIRE(chain.windows.size() == 5);
  REQUIRE(chain.gaps.size() == 4);
  const auto levels = cfg.ladder();
  for (std::size_t i = 0; i < chain.windows.size(); ++i) {
    const Window& w = chain.windows[i];
    CHECK(w.eps == levels[i]);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK((w.y1 < chain.windows[j].x1 || w.x1 > chain.windows[j].y1));
    }
    // Dense oracle on the window: ends vanish, interior inside (0, eps).
    double mx = 0.0, mn = 1.0;
    for (int k = 1; k < 2000; ++k) {
      const double t = w.x1 + (w.y1 - w.x1) * k / 2000.0;
      const double v = std::abs(std::sin(av * t) - std::sin(bv * t));
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    CHECK(mx < w.eps);
    CHECK(mn > 0.0);
    CHECK(std::abs(std::sin(av * w.x1) - std::sin(bv * w.x1)) < 1e-9);
    CHECK(revalidate_window(spec, a, b, w, cfg, 5000));
  }
  for (const auto& g : chain.gaps) {
    CHECK(g.value > cfg.mu_min);
    CHECK(std::abs(std::sin(av * g.w) - std::sin(bv * g.w)) == doctest::Approx(g.value));
  }
  CHECK(chain.min_gap() > cfg.mu_min);
}

TEST_CASE("linear_ax chains stop after the single crossing") {
  const auto chain = build_chain(find_family("linear_ax"), Parameter::untagged(1.0), Parameter::untagged(2.0),
                                 WindowKind::cross, RealInterval::closed(-5, 5), small_grid());
  CHECK_FALSE(chain.succeeded());
  CHECK(chain.reason == ChainFailureReason::no_window);
  CHECK(chain.deepest_level == 0);
  CHECK(chain.failed_eps == 0.5);
}

TEST_CASE("gap witnesses") {
  const auto spec = find_family("sin_ax");
  const auto a = Parameter::untagged(1.0), b = Parameter::untagged(2.0);
  Window w1{WindowKind::cross, 0.1, 1.0, 0.5, 0, 0, 0, 0};
  Window w2{WindowKind::cross, 2.0, 3.0, 0.5, 0, 0, 0, 0};
  const auto g = gap_separation(spec, a, b, w1, w2, small_grid(2001));
  // Oracle: dense max of |sin t - sin 2t| over [1, 2].
  double best = 0.0;
  for (int k = 0; k <= 100000; ++k) best = std::max(best, std::abs(std::sin(1 + k / 1e5) - std::sin(2 + 2 * k / 1e5)));
  CHECK(g.value == doctest::Approx(best).epsilon(1e-8));
  CHECK(g.gap_lo == 1.0);
  CHECK(g.gap_hi == 2.0);
  Window w3{WindowKind::cross, 0.5, 1.5, 0.5, 0, 0, 0, 0};
  CHECK_THROWS_AS(gap_separation(spec, a, b, w1, w3, small_grid()), PreconditionError);
}

TEST_CASE("revalidation rejects a window whose interior reaches eps") {
  const auto spec = find_family("sin_ax");
  const auto a = Parameter::untagged(1.0), b = Parameter::untagged(2.0);
  Window bogus{WindowKind::cross, pi / 3, pi, 0.5, 0, 0, 0, 0};
  CHECK_FALSE(revalidate_window(spec, a, b, bogus, default_config(), 1000));
  bogus.eps = 2.0;
  CHECK(revalidate_window(spec, a, b, bogus, default_config(), 1000));
}
