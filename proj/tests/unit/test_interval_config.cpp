#include <doctest.h>

#include <cmath>

#include "chaoscope/config.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/interval.hpp"
#include "chaoscope/numfmt.hpp"

using namespace chaoscope;

TEST_CASE("interval parsing and containment") {
  const auto r = RealInterval::parse("-2:2.5");
  CHECK(r.lo == -2.0);
  CHECK(r.hi == 2.5);
  CHECK(r.contains(-2.0));
  CHECK_FALSE(r.contains(2.6));
  const auto line = RealInterval::parse("-inf:inf");
  CHECK_FALSE(line.is_finite());
  CHECK(line.lo_open);
  CHECK(line.contains(1e300));
  const auto half = RealInterval::left_open(0.0, 1.0);
  CHECK_FALSE(half.contains(0.0));
  CHECK(half.contains(1.0));
  CHECK(half.contains(RealInterval::closed(0.01, 1.0)));
  CHECK_FALSE(half.contains(RealInterval::closed(0.0, 1.0)));
  CHECK(half.to_string() == "(0, 1]");
  CHECK_THROWS_AS(RealInterval::parse("1"), ParseError);
  CHECK_THROWS_AS(RealInterval::parse("a:b"), ParseError);
  CHECK_THROWS(RealInterval::parse("2:1"));
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("default ladder") {
  const ScanConfig c = default_config();
  const auto l = c.ladder();
  REQUIRE(l.size() == 5);
  CHECK(l[0] == 0.5);
  CHECK(l[4] == doctest::Approx(0.5 * std::pow(0.25, 4)));
  CHECK(c.smallest_level() == doctest::Approx(0.001953125));
}

TEST_CASE("config validation names the violated invariant") {
  ScanConfig c;
  c.eps_ratio = 1.5;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("eps_ratio"), ConfigError);
  c = ScanConfig{};
  c.tol_eq = 1e-3;  // smallest level / 4 is about 4.9e-4
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("tol_eq"), ConfigError);
  c = ScanConfig{};
  c.grid_points = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
