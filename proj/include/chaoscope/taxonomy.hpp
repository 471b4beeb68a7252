#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/families.hpp"

namespace chaoscope {

enum class ConvergenceVerdict { uniform, nonuniform, divergent };
enum class LimitKind { alpha_itself, other, none };
enum class PointLabel { insensitive, smooth_sensitive, discontinuity, total_disorder, dense_disorder, inconclusive };
enum class FamilyLabel { insensitive, smooth, discontinuous_sensitive, totally_disordered, dense_disordered, mixed };

std::string_view to_string(ConvergenceVerdict v);
std::string_view to_string(LimitKind k);
std::string_view to_string(PointLabel l);
std::string_view to_string(FamilyLabel l);

/// Moments used to estimate sup-norms: a uniform core grid 1% inside each
/// finite end (ending at +-10 at infinite ends), geometric grading toward
/// every finite boundary down to boundary_margin, and out to a 1e12
/// horizon at infinite ends. Boundary moments themselves are excluded.
struct ProbeGrid {
  std::vector<double> moments;
  std::size_t core_begin = 0;  // moments[core_begin, core_end) is the core grid
  std::size_t core_end = 0;
};
ProbeGrid make_probe_grid(const RealInterval& domain, const ScanConfig& config, std::int64_t core_points = 2001);

struct ConvergenceProfile {
  std::vector<std::pair<std::int64_t, double>> sup_norms;  // (n, sup |psi_u(n) - limit|), n from 1
  bool pointwise_ok = false;
  LimitKind limit = LimitKind::none;
  std::string limit_description;
  std::optional<Parameter> limit_param;
  ConvergenceVerdict verdict = ConvergenceVerdict::divergent;
  std::vector<double> excluded_moments;  // singular probe moments
};

/// Sequence u(n) -> alpha measured on the probe grid. Pointwise
/// convergence is judged on the core grid from the last consecutive
/// difference; the limit is psi_alpha, else psi_beta for beta = alpha's
/// value carrying the last term's tag class, else unidentified. Throws
/// PreconditionError unless |u(n) - alpha| is strictly decreasing and
/// nonzero.
ConvergenceProfile convergence_profile(const FamilySpec& spec, const Parameter& alpha, std::span<const Parameter> seq,
                                       const ProbeGrid& grid, const ScanConfig& config);

struct BatterySequence {
  std::string name;
  std::vector<Parameter> terms;
  /// Arithmetic classes occurring among the terms.
  std::vector<ArithmeticClass> classes;
};

/// Fixed-class sequences (rational, quadratic, transcendental, untagged;
/// from above and below), mixed-class sequences (degree ladder,
/// alternating rational/transcendental, seeded random class) and four
/// irrational companions with varying tag. Untagged sequences are left out
/// for families that need tags.
std::vector<BatterySequence> build_battery(const FamilySpec& spec, const Parameter& alpha, const ScanConfig& config);

struct PointResult {
  Parameter alpha = Parameter::untagged(0.0);
  PointLabel label = PointLabel::inconclusive;
  std::vector<std::pair<std::string, ConvergenceProfile>> profiles;
  std::optional<ArithmeticClass> exceptional_class;  // class exempted by the discontinuity or smooth rule
  double divergent_fraction = 0.0;
  std::vector<std::string> notes;
};

PointResult classify_point(const FamilySpec& spec, const Parameter& alpha, const ScanConfig& config);

struct FamilyResult {
  FamilyLabel label = FamilyLabel::mixed;
  std::vector<PointResult> points;
};

/// Classifies omega_samples points spread over the family's sampling
/// region, alternately rational- and transcendental-tagged, and
/// aggregates the labels.
FamilyResult classify_family(const FamilySpec& spec, const ScanConfig& config);

/// The index-th sample point of classify_family: rational with
/// denominator 1000 at even indices, transcendental at odd ones.
Parameter taxonomy_sample_param(double value, int index);

}  // namespace chaoscope
