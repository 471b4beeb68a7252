#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "chaoscope/errors.hpp"
#include "chaoscope/expression.hpp"
#include "chaoscope/taxonomy.hpp"

using namespace chaoscope;

namespace {

const ConvergenceProfile* profile(const PointResult& r, const std::string& name) {
  for (const auto& [n, p] : r.profiles) {
    if (n == name) return &p;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("probe grids stay inside the domain and approach its ends") {
  const ScanConfig cfg = default_config();
  const auto g = make_probe_grid(RealInterval::right_open(0.0, 1.0), cfg);
  REQUIRE(!g.moments.empty());
  CHECK(std::is_sorted(g.moments.begin(), g.moments.end()));
  CHECK(g.moments.front() > 0.0);
  CHECK(g.moments.front() <= 2 * cfg.boundary_margin);
  CHECK(g.moments.back() < 1.0);
  CHECK(1.0 - g.moments.back() <= 2 * cfg.boundary_margin);
  CHECK(g.core_end - g.core_begin == 2001);
  CHECK(g.moments[g.core_begin] == doctest::Approx(0.01));
  const auto line = make_probe_grid(RealInterval::real_line(), cfg);
  CHECK(line.moments.front() <= -1e12);
  CHECK(line.moments.back() >= 1e12);
}

TEST_CASE("linear_ax sup-norms are |u(n) - alpha| times the largest probe") {
  const ScanConfig cfg = default_config();
  const auto spec = find_family("linear_ax");
  const auto grid = make_probe_grid(spec.theta, cfg);
  double zmax = 0.0;
  for (double z : grid.moments) zmax = std::max(zmax, std::abs(z));
  std::vector<Parameter> seq;
  for (int n = 1; n <= 40; ++n) seq.push_back(Parameter::untagged(1.0 + std::ldexp(1.0, -n)));
  const auto p = convergence_profile(spec, Parameter::untagged(1.0), seq, grid, cfg);
  CHECK(p.pointwise_ok);
  CHECK(p.limit == LimitKind::alpha_itself);
  CHECK(p.verdict == ConvergenceVerdict::nonuniform);
  REQUIRE(p.sup_norms.size() == 40);
  for (int n = 1; n <= 40; ++n) {
    // a z is rounded at the scale of the 1e12 horizon.
    const double want = std::ldexp(1.0, -n) * zmax;
    CHECK(std::abs(p.sup_norms[n - 1].second - want) <= 1e-9 * want + 1e-3);
  }
}

TEST_CASE("sequences must approach alpha strictly") {
  const ScanConfig cfg = default_config();
  const auto spec = find_family("linear_ax");
  const auto grid = make_probe_grid(spec.theta, cfg, 11);
  const std::vector<Parameter> flat = {Parameter::untagged(1.5), Parameter::untagged(1.5)};
  CHECK_THROWS_AS(convergence_profile(spec, Parameter::untagged(1.0), flat, grid, cfg), PreconditionError);
  const std::vector<Parameter> hits = {Parameter::untagged(1.5), Parameter::untagged(1.0)};
  CHECK_THROWS_AS(convergence_profile(spec, Parameter::untagged(1.0), hits, grid, cfg), PreconditionError);
}

TEST_CASE("battery shape") {
  const ScanConfig cfg = default_config();
  const auto theta = build_battery(find_family("theta_family"), Parameter::rational(1, 2), cfg);
  for (const auto& b : theta) {
    CHECK(b.name.find("untagged") == std::string::npos);
    CHECK(b.terms.size() == static_cast<std::size_t>(cfg.battery_terms));
    CHECK(std::find(b.classes.begin(), b.classes.end(), ArithmeticClass::untagged) == b.classes.end());
  }
  const auto lin = build_battery(find_family("linear_ax"), Parameter::untagged(1.0), cfg);
  CHECK(lin.size() == 15);
  for (const auto& b : lin) {
    for (std::size_t i = 1; i < b.terms.size(); ++i) {
      CHECK(std::abs(b.terms[i].value() - 1.0) < std::abs(b.terms[i - 1].value() - 1.0));
    }
  }
}

TEST_CASE("point labels") {
  const ScanConfig cfg = default_config();
  const auto flat = make_expression_family("flat_in_x", Expression::parse("a"), RealInterval::closed(0, 1),
                                           RealInterval::closed(0, 1));
  CHECK(classify_point(flat, Parameter::untagged(0.5), cfg).label == PointLabel::insensitive);
  CHECK(classify_point(find_family("log_sine"), Parameter::untagged(0.5), cfg).label ==
        PointLabel::smooth_sensitive);
  CHECK(classify_point(find_family("xi_random"), Parameter::untagged(0.4), cfg).label == PointLabel::total_disorder);
  const auto theta = classify_point(find_family("theta_family"), Parameter::rational(1, 2), cfg);
  CHECK(theta.label == PointLabel::dense_disorder);
  CHECK(theta.divergent_fraction >= cfg.disorder_fraction);
  CHECK(theta.divergent_fraction < 1.0);
  CHECK_THROWS_AS(classify_point(find_family("theta_family"), Parameter::untagged(0.5), cfg), PreconditionError);
  CHECK_THROWS_AS(classify_point(find_family("sin_2pia"), Parameter::untagged(1.0), cfg), PreconditionError);
}

TEST_CASE("mixed_rat_irr: a rational point is a discontinuity, an irrational one is smooth") {
  const ScanConfig cfg = default_config();
  const auto spec = find_family("mixed_rat_irr");
  const auto half = classify_point(spec, Parameter::rational(1, 2), cfg);
  CHECK(half.label == PointLabel::discontinuity);
  REQUIRE(half.exceptional_class.has_value());
  CHECK(*half.exceptional_class == ArithmeticClass::rational);
  const auto* rat = profile(half, "rational_above");
  const auto* tr = profile(half, "transcendental_above");
  REQUIRE(rat);
  REQUIRE(tr);
  // Rational terms: u x -> x / 2 with sup error |u - 1/2| on [0, 1).
  CHECK(rat->limit == LimitKind::alpha_itself);
  CHECK(rat->verdict == ConvergenceVerdict::uniform);
  CHECK(rat->sup_norms.front().second <= std::abs(std::get<RationalTag>(Parameter::rational(1, 2).tag()).num));
  // Irrational terms: the sine member at 1/2, approached non-uniformly near x = 1.
  CHECK(tr->limit == LimitKind::other);
  CHECK(tr->verdict == ConvergenceVerdict::nonuniform);
  REQUIRE(tr->limit_param.has_value());
  CHECK(tr->limit_param->value() == 0.5);

  const auto irr = classify_point(spec, Parameter::transcendental(0.4), cfg);
  CHECK(irr.label == PointLabel::smooth_sensitive);
  REQUIRE(irr.exceptional_class.has_value());
  CHECK(*irr.exceptional_class == ArithmeticClass::rational);
}

TEST_CASE("family labels") {
  ScanConfig cfg = default_config();
  cfg.omega_samples = 4;
  CHECK(classify_family(find_family("sin_2pia"), cfg).label == FamilyLabel::smooth);
  CHECK(classify_family(find_family("xi_random"), cfg).label == FamilyLabel::totally_disordered);
  CHECK(classify_family(find_family("mixed_rat_irr"), cfg).label == FamilyLabel::discontinuous_sensitive);
  CHECK(classify_family(find_family("theta_family"), cfg).label == FamilyLabel::dense_disordered);
  CHECK(taxonomy_sample_param(0.1234, 0) == Parameter::rational(123, 1000));
  CHECK(taxonomy_sample_param(0.1234, 1).arithmetic_class() == ArithmeticClass::transcendental);
}
