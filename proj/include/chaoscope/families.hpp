#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaoscope/interval.hpp"
#include "chaoscope/parameter.hpp"

namespace chaoscope {

/// psi_a(x). Must be pure: identical inputs give bit-identical outputs.
/// May throw SingularMoment or Divergence.
using Evaluator = std::function<double(const Parameter&, double)>;

/// A parametrized family (psi_a) with parameter domain omega and moment
/// domain theta.
struct FamilySpec {
  std::string id;
  RealInterval omega;
  RealInterval theta;
  Evaluator evaluator;
  std::optional<RealInterval> codomain_hint;
  std::string notes;
  /// Finite region of omega that quantifier sampling draws from.
  RealInterval sample_omega;
  /// Scan range used when the caller gives none (finite theta only).
  std::optional<RealInterval> default_range;
  /// Untagged parameters are rejected (the family branches on class).
  bool requires_tags = false;
};

/// Every built-in family. `xi_seed` keys the hash behind xi_random.
std::vector<FamilySpec> builtin_catalog(std::uint64_t xi_seed = 0);

/// Throws PreconditionError for an unknown id.
FamilySpec find_family(const std::string& id, std::uint64_t xi_seed = 0);

/// psi_a(x) with domain checks. DomainError names the violated domain.
double eval(const FamilySpec& spec, const Parameter& a, double x);

/// |psi_alpha(x) - psi_beta(x)|.
double eval_diff(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, double x);

/// Signed psi_alpha(x) - psi_beta(x); the scanner works on this.
double eval_signed_diff(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                        double x);

struct PrimeSumValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

/// Sum over primes p <= max_prime of sin(a x / p) / p^2, with the
/// remainder bound 1/max_prime (since sum_{n > P} 1/n^2 <= 1/P).
PrimeSumValue prime_sum_truncation(const Parameter& a, double x, std::int64_t max_prime);

/// Primes <= limit, ascending.
std::span<const std::int64_t> primes_up_to(std::int64_t limit);

/// n-th iterate of F_a(x) = a (sin(pi x) + cos(2x) + x). Throws Divergence
/// if an intermediate value is not finite.
double iterate_F(const Parameter& a, double x, int n);

/// Xi(a) in (0,1): seeded hash of the parameter's canonical bytes.
double xi_surrogate(const Parameter& a, std::uint64_t seed);

/// theta(a): 3/4 for rationals, 1 for transcendentals, 1/n for algebraic
/// irrationals of degree n. Throws PreconditionError for untagged values.
double theta_class_value(const Parameter& a);

inline constexpr std::int64_t kPrimeSumDefaultCutoff = 100000;

}  // namespace chaoscope
