#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "chaoscope/errors.hpp"
#include "chaoscope/families.hpp"

using namespace chaoscope;

namespace {

const double pi = std::numbers::pi;

// Independent trial-division prime test for the oracle sums.
bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("catalog ids are unique and findable") {
  std::set<std::string> ids;
  for (const auto& f : builtin_catalog()) {
    CHECK(ids.insert(f.id).second);
    CHECK(f.sample_omega.is_finite());
    CHECK(f.omega.contains(f.sample_omega));
    if (f.default_range) CHECK(f.theta.contains(*f.default_range));
  }
  for (const char* id : {"log_sine", "sin_ax", "g_iter_2", "prime_sum", "linear_ax", "sin_2pia", "mixed_rat_irr",
                         "xi_random", "theta_family"}) {
    CHECK(ids.count(id) == 1);
  }
  CHECK_THROWS_AS(find_family("nope"), PreconditionError);
}

TEST_CASE("closed forms") {
  const auto a = Parameter::untagged(0.3);
  CHECK(eval(find_family("sin_ax"), Parameter::untagged(2.0), 0.7) == doctest::Approx(std::sin(1.4)));
  CHECK(eval(find_family("linear_ax"), Parameter::untagged(-1.5), 4.0) == -6.0);
  CHECK(eval(find_family("log_sine"), a, 0.2) ==
        doctest::Approx((std::sin(0.3 * std::log(1.0 / 0.12) / 0.2) + 1) / 2));
  CHECK(eval(find_family("log_sine"), Parameter::untagged(0.0), 0.2) == 0.5);
  CHECK(eval(find_family("sin_2pia"), a, 0.5) == doctest::Approx((std::sin(2 * pi * 0.3 / 0.5) + 1) / 2));
  CHECK_THROWS_AS(eval(find_family("log_sine"), a, 0.0), DomainError);
  CHECK_THROWS_AS(eval(find_family("sin_2pia"), a, 1.0), DomainError);
}

TEST_CASE("mixed_rat_irr branches on the tag, not the value") {
  const auto f = find_family("mixed_rat_irr");
  CHECK(eval(f, Parameter::rational(1, 2), 0.4) == doctest::Approx(0.2));
  const double s = (std::sin(2 * pi * 0.5 / 0.6) + 1) / 2;
  CHECK(eval(f, Parameter::transcendental(0.5), 0.4) == doctest::Approx(s));
  CHECK(eval(f, Parameter::untagged(0.5), 0.4) == doctest::Approx(s));
}

TEST_CASE("theta_family uses the class value") {
  CHECK(theta_class_value(Parameter::rational(1, 3)) == 0.75);
  CHECK(theta_class_value(Parameter::transcendental(0.3)) == 1.0);
  CHECK(theta_class_value(Parameter::algebraic(3, 0.7937)) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(theta_class_value(Parameter::untagged(0.3)), PreconditionError);
  const auto f = find_family("theta_family");
  CHECK(f.requires_tags);
  CHECK_THROWS_AS(eval(f, Parameter::untagged(0.3), 0.1), DomainError);
  const double t = 0.75;
  CHECK(eval(f, Parameter::rational(1, 3), 0.1) ==
        doctest::Approx((std::sin((std::sin(1 / t) + 1) / (2 - 0.2)) + 1) / 2));
}

TEST_CASE("F iterates") {
  const auto a = Parameter::untagged(0.8);
  const double x = 0.3;
  const double f1 = 0.8 * (std::sin(pi * x) + std::cos(2 * x) + x);
  const double f2 = 0.8 * (std::sin(pi * f1) + std::cos(2 * f1) + f1);
  CHECK(iterate_F(a, x, 1) == doctest::Approx(f1));
  CHECK(iterate_F(a, x, 2) == doctest::Approx(f2));
  CHECK(eval(find_family("g_iter_2"), a, x) == doctest::Approx(f2 - 0.64 * x));
  CHECK_THROWS_AS(iterate_F(Parameter::untagged(1e300), 1e300, 3), Divergence);
}

TEST_CASE("prime sum against a trial-division oracle") {
  const auto a = Parameter::untagged(1.7);
  const double x = 3.1;
  double oracle = 0.0;
  for (long p = 2; p <= 2000; ++p) {
    if (is_prime(p)) oracle += std::sin(1.7 * 3.1 / p) / (double(p) * p);
  }
  const auto v = prime_sum_truncation(a, x, 2000);
  CHECK(v.value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(v.tail_bound == doctest::Approx(1.0 / 2000));
  CHECK(primes_up_to(30).size() == 10);
  CHECK(primes_up_to(2).back() == 2);
}

TEST_CASE("xi surrogate is deterministic, tag-aware and seeded") {
  const auto p = Parameter::untagged(0.4);
  const double v = xi_surrogate(p, 7);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK(xi_surrogate(p, 7) == v);
  CHECK(xi_surrogate(p, 8) != v);
  CHECK(xi_surrogate(Parameter::transcendental(0.4), 7) != v);
  CHECK(eval(find_family("xi_random", 7), p, 0.5) == doctest::Approx(0.5 * v));
}
