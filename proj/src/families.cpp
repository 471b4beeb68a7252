#include "chaoscope/families.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "chaoscope/detail/sampling.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase of the chirp a*ln(1/(2ax))/x, continuously extended by 0 at a = 0.
double log_sine(const Parameter& a, double x) {
  const double av = a.value();
  if (av == 0.0) return 0.5;
  return (std::sin(av * -std::log(2.0 * av * x) / x) + 1.0) / 2.0;
}

// Alternative reading a*ln(ax/2)/x of the same formula.
double log_sine_alt(const Parameter& a, double x) {
  const double av = a.value();
  if (av == 0.0) return 0.5;
  return (std::sin(av * std::log(av * x / 2.0) / x) + 1.0) / 2.0;
}

double sin_2pia(double a, double x) {
  if (x == 1.0) throw SingularMoment("sin(2 pi a/(1-x)) is singular at x = 1");
  return (std::sin(2.0 * kPi * a / (1.0 - x)) + 1.0) / 2.0;
}

FamilySpec make(std::string id, RealInterval omega, RealInterval theta, Evaluator ev,
                std::optional<RealInterval> codomain, std::string notes, RealInterval sample,
                std::optional<RealInterval> default_range = std::nullopt, bool requires_tags = false) {
  FamilySpec s;
  s.id = std::move(id);
  s.omega = omega;
  s.theta = theta;
  s.evaluator = std::move(ev);
  s.codomain_hint = codomain;
  s.notes = std::move(notes);
  s.sample_omega = sample;
  s.default_range = default_range;
  s.requires_tags = requires_tags;
  return s;
}

}  // namespace

std::span<const std::int64_t> primes_up_to(std::int64_t limit) {
  // One sieve shared by all callers, grown on demand.
  static std::mutex mu;
  static std::vector<std::int64_t> primes;
  static std::int64_t sieved = 1;
  std::lock_guard<std::mutex> lock(mu);
  if (limit > sieved) {
    const std::int64_t n = std::max<std::int64_t>(limit, 2 * sieved);
    std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
    primes.clear();
    for (std::int64_t i = 2; i <= n; ++i) {
      if (composite[static_cast<std::size_t>(i)]) continue;
      primes.push_back(i);
      for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    sieved = n;
  }
  auto end = std::upper_bound(primes.begin(), primes.end(), limit);
  return {primes.data(), static_cast<std::size_t>(end - primes.begin())};
}

PrimeSumValue prime_sum_truncation(const Parameter& a, double x, std::int64_t max_prime) {
  if (max_prime < 2) throw PreconditionError("prime_sum truncation needs P >= 2");
  const double ax = a.value() * x;
  double sum = 0.0;
  for (std::int64_t p : primes_up_to(max_prime)) {
    const double pd = static_cast<double>(p);
    sum += std::sin(ax / pd) / (pd * pd);
  }
  return {sum, 1.0 / static_cast<double>(max_prime)};
}

double iterate_F(const Parameter& a, double x, int n) {
  if (n < 1) throw PreconditionError("iterate_F needs n >= 1");
  const double av = a.value();
  double v = x;
  for (int i = 0; i < n; ++i) {
    v = av * (std::sin(kPi * v) + std::cos(2.0 * v) + v);
    if (!std::isfinite(v)) {
      throw Divergence("F iterate " + std::to_string(i + 1) + " diverged from x = " + format_double(x));
    }
  }
  return v;
}

double xi_surrogate(const Parameter& a, std::uint64_t seed) {
  std::uint64_t h = detail::mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::uint8_t byte : a.canonical_bytes()) h = detail::mix64(h ^ byte);
  // 53 random bits mapped into the open unit interval.
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double theta_class_value(const Parameter& a) {
  if (const auto* alg = std::get_if<AlgebraicTag>(&a.tag())) return 1.0 / alg->degree;
  switch (a.arithmetic_class()) {
    case ArithmeticClass::rational: return 0.75;
    case ArithmeticClass::transcendental: return 1.0;
    default: throw PreconditionError("theta_family needs a tagged parameter, got untagged " + a.to_literal());
  }
}

std::vector<FamilySpec> builtin_catalog(std::uint64_t xi_seed) {
  std::vector<FamilySpec> out;
  const auto unit = RealInterval::closed(0.0, 1.0);
  const auto line = RealInterval::real_line();
  const auto mid_unit = RealInterval::closed(0.05, 0.95);

  out.push_back(make("log_sine", unit, RealInterval::left_open(0.0, 1.0), log_sine, unit,
                     "{sin[a ln(1/(2ax))/x]+1}/2; first-kind example and smooth-sensitive example; "
                     "1/2ax read as 1/(2ax); a = 0 extended by continuity to 1/2; singular at x = 0",
                     mid_unit, RealInterval::closed(0.01, 1.0)));
  out.push_back(make("log_sine_alt", unit, RealInterval::left_open(0.0, 1.0), log_sine_alt, unit,
                     "{sin[a ln(ax/2)/x]+1}/2; alternative reading of the log_sine formula", mid_unit,
                     RealInterval::closed(0.01, 1.0)));
  out.push_back(make(
      "sin_ax", line, line, [](const Parameter& a, double x) { return std::sin(a.value() * x); },
      RealInterval::closed(-1.0, 1.0), "sin(ax); first-kind example", RealInterval::closed(0.5, 2.5)));
  for (int n = 1; n <= 5; ++n) {
    out.push_back(make(
        "g_iter_" + std::to_string(n), line, line,
        [n](const Parameter& a, double x) { return iterate_F(a, x, n) - std::pow(a.value(), n) * x; },
        std::nullopt,
        "F_a^n(x) - a^n x with F_a(x) = a(sin(pi x) + cos(2x) + x), n = " + std::to_string(n) +
            "; third-kind example",
        RealInterval::closed(0.5, 1.5)));
  }
  out.push_back(make(
      "prime_sum", line, line,
      [](const Parameter& a, double x) {
        return prime_sum_truncation(a, x, kPrimeSumDefaultCutoff).value;
      },
      std::nullopt, "sum over primes p of sin(ax/p)/p^2, truncated at p <= 100000 (tail bound 1e-5)",
      RealInterval::closed(0.5, 2.5)));
  out.push_back(make(
      "linear_ax", line, line, [](const Parameter& a, double x) { return a.value() * x; }, std::nullopt,
      "ax; smooth-sensitive example on an unbounded moment domain", RealInterval::closed(0.5, 2.5)));
  out.push_back(make(
      "sin_2pia", unit, RealInterval::right_open(0.0, 1.0),
      [](const Parameter& a, double x) { return sin_2pia(a.value(), x); }, unit,
      "[sin(2 pi a/(1-x)) + 1]/2; smooth-sensitive example; singular at x = 1", mid_unit,
      RealInterval::closed(0.0, 0.99)));
  out.push_back(make(
      "mixed_rat_irr", unit, RealInterval::right_open(0.0, 1.0),
      [](const Parameter& a, double x) {
        if (a.is_rational()) return a.value() * x;
        return sin_2pia(a.value(), x);
      },
      unit,
      "ax for rational-tagged a, [sin(2 pi a/(1-x)) + 1]/2 otherwise (untagged counts as irrational); "
      "discontinuity-point example",
      mid_unit, RealInterval::closed(0.0, 0.99)));
  out.push_back(make(
      "xi_random", RealInterval::open(0.0, 1.0), unit,
      [xi_seed](const Parameter& a, double x) { return x * xi_surrogate(a, xi_seed); }, unit,
      "x Xi(a) with Xi a seeded hash surrogate of an everywhere-discontinuous (0,1) -> (0,1) map; "
      "total-disorder example",
      mid_unit, unit));
  out.push_back(make(
      "theta_family", RealInterval::left_open(0.0, 1.0), RealInterval::right_open(0.0, 1.0),
      [](const Parameter& a, double x) {
        const double t = theta_class_value(a);
        return (std::sin((std::sin(1.0 / t) + 1.0) / (2.0 - 2.0 * x)) + 1.0) / 2.0;
      },
      unit,
      "{sin{[sin(1/theta(a))+1]/(2-2x)}+1}/2, theta = 3/4 rational, 1 transcendental, 1/n algebraic of "
      "degree n; dense-disorder example; tagged parameters only",
      mid_unit, RealInterval::closed(0.0, 0.99), true));
  return out;
}

FamilySpec find_family(const std::string& id, std::uint64_t xi_seed) {
  for (auto& spec : builtin_catalog(xi_seed)) {
    if (spec.id == id) return spec;
  }
  throw PreconditionError("unknown family '" + id + "'");
}

double eval(const FamilySpec& spec, const Parameter& a, double x) {
  if (!spec.omega.contains(a.value())) {
    throw DomainError(spec.id + ": parameter " + a.to_literal() + " outside omega " + spec.omega.to_string());
  }
  if (!spec.theta.contains(x)) {
    throw DomainError(spec.id + ": moment " + format_double(x) + " outside theta " + spec.theta.to_string());
  }
  if (spec.requires_tags && !a.is_tagged()) {
    throw DomainError(spec.id + ": requires a tagged parameter, got " + a.to_literal());
  }
  const double v = spec.evaluator(a, x);
  if (!std::isfinite(v)) {
    throw Divergence(spec.id + ": non-finite value at a = " + a.to_literal() + ", x = " + format_double(x));
  }
  return v;
}

double eval_signed_diff(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, double x) {
  return eval(spec, alpha, x) - eval(spec, beta, x);
}

double eval_diff(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, double x) {
  return std::abs(eval_signed_diff(spec, alpha, beta, x));
}

}  // namespace chaoscope
