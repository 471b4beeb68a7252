#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/expression.hpp"
#include "chaoscope/interval.hpp"
#include "chaoscope/parameter.hpp"

namespace chaoscope {

/// A family of real sequences u_x(n), n >= 0. Either `term` gives u_x(n)
/// directly, or the operator form applies `step` n times to `init(x)`.
struct SequenceFamily {
  std::string id;
  RealInterval omega;
  RealInterval sample_omega;
  std::string notes;

  std::function<double(const Parameter&, std::int64_t)> term;
  std::function<double(const Parameter&)> init;
  std::function<double(const Parameter&, double)> step;

  /// Turns a sampled value into a parameter (tagging it when the family
  /// branches on arithmetic class).
  std::function<Parameter(double)> make_param;

  bool is_iteration() const { return static_cast<bool>(step); }

  /// u_x(n). Throws Divergence naming the first non-finite index.
  double generate(const Parameter& x, std::int64_t n) const;
};

/// Streams u_x(0), u_x(1), ... without storing the orbit.
class OrbitCursor {
 public:
  OrbitCursor(const SequenceFamily& fam, Parameter x);
  double value() const { return value_; }
  std::int64_t index() const { return index_; }
  void advance();
  void seek(std::int64_t n);  // forward only for iteration families

 private:
  void load();
  const SequenceFamily* fam_;
  Parameter x_;
  std::int64_t index_ = 0;
  double value_ = 0.0;
};

/// logistic_357, sin_drift and sin_drift_commensurable.
std::vector<SequenceFamily> builtin_sequences();

/// Throws PreconditionError for an unknown id.
SequenceFamily find_sequence(const std::string& id);

/// User sequence from an expression in `a` (parameter) and `n` (index).
/// With `iteration`, the expression is a step map in `a` and `x` (state)
/// started from u(0) = a.
SequenceFamily make_expression_sequence(const std::string& id, const Expression& expr, RealInterval omega,
                                        bool iteration = false);

struct TailStats {
  double limsup_est = 0.0;
  double liminf_est = 0.0;
  std::int64_t n_lo = 0;  // first tail index
  std::int64_t n_hi = 0;  // one past the last tail index
  std::int64_t argmax_index = 0;
  std::int64_t argmin_index = 0;
};

/// max and min of |u_x(n) - u_y(n)| over n in [tail_start, tail_start + tail_len).
TailStats tail_stats(const SequenceFamily& fam, const Parameter& x, const Parameter& y, std::int64_t tail_start,
                     std::int64_t tail_len);
TailStats tail_stats(const SequenceFamily& fam, const Parameter& x, const Parameter& y, const ScanConfig& config);

struct TailStudyRow {
  std::int64_t tail_len = 0;
  double limsup_est = 0.0;
  double liminf_est = 0.0;
};

struct DuWitness {
  Parameter x = Parameter::untagged(0.0);
  RealInterval v{};
  bool far = false;  // V chosen away from x
  bool found = false;
  Parameter y = Parameter::untagged(0.0);  // witness, or best candidate when !found
  TailStats stats;
  int candidates = 0;                // tail evaluations spent
  std::vector<TailStudyRow> study;   // tail doubling from tail_len / 4 to 2 tail_len
};

struct DuResult {
  bool holds = false;
  double lambda = 0.0;
  std::vector<DuWitness> witnesses;
  std::vector<std::string> failures;
};

/// For du_samples pairs (x, V), V alternately near and far from x, scans
/// du_grid points of V then refines around the best candidate, looking for
/// y with limsup >= lambda - tol_eq and liminf <= tol_liminf.
DuResult check_du(const SequenceFamily& fam, double lambda, const ScanConfig& config);

struct Cond41Witness {
  Parameter alpha = Parameter::untagged(0.0);
  Parameter chi = Parameter::untagged(0.0);
  double radius = 0.0;
  Parameter beta = Parameter::untagged(0.0);
  bool cond1 = false;  // for every eps and checkpoint n, some m > n has d(m) < eps
  bool cond2 = false;  // for every checkpoint n, some m > n has d(m) >= eps_div
  double min_after_last = 0.0;  // min of d after the last checkpoint
  double max_after_last = 0.0;
  int attempts = 0;
};

struct Cond41Result {
  bool holds = false;
  double eps_div = 0.0;
  std::vector<std::int64_t> checkpoints;
  std::vector<Cond41Witness> witnesses;
  std::vector<std::string> failures;
};

/// Finite surrogate of the two discrete chaotic-dependence conditions:
/// for sampled alpha and shrinking neighbourhoods of sampled chi, some beta
/// must satisfy both conditions at every checkpoint of the tail.
/// eps_div defaults to 0.1.
Cond41Result check_41(const SequenceFamily& fam, const ScanConfig& config, std::optional<double> eps_div = std::nullopt);

}  // namespace chaoscope
