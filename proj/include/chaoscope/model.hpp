#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/interval.hpp"
#include "chaoscope/parameter.hpp"

namespace chaoscope {

enum class WindowKind { disjoint, cross };
enum class Strength { strong, weak };

std::string_view to_string(WindowKind k);
std::string_view to_string(Strength s);
WindowKind parse_window_kind(std::string_view s);
Strength parse_strength(std::string_view s);

/// [x1, y1] on which 0 < |d| < eps holds in the open interior, where
/// d = psi_alpha - psi_beta. Disjoint windows have |d| = eps at both ends,
/// cross windows have d = 0 at both ends.
struct Window {
  WindowKind kind = WindowKind::cross;
  double x1 = 0.0;
  double y1 = 0.0;
  double eps = 0.0;
  double interior_min = 0.0;
  double interior_max = 0.0;
  double boundary_x1 = 0.0;  // |d(x1)| as evaluated
  double boundary_y1 = 0.0;  // |d(y1)| as evaluated
};

/// Point between two chained windows where |d| exceeds the separation
/// level.
struct GapWitness {
  double w = 0.0;
  double value = 0.0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
};

enum class ChainFailureReason { none, no_window, no_disjoint_window, gap_too_small };
std::string_view to_string(ChainFailureReason r);

struct WindowChain {
  WindowKind kind = WindowKind::cross;
  std::vector<Window> windows;  // strictly decreasing eps
  bool pairwise_disjoint = true;
  std::vector<GapWitness> gaps;  // gaps[i] sits between windows[i] and windows[i+1]
  double mu_candidate = 0.0;

  // Failure report; `reason == none` means the full ladder was chained.
  ChainFailureReason reason = ChainFailureReason::none;
  int deepest_level = 0;       // number of windows chained
  double failed_eps = 0.0;     // ladder level that could not be served
  RealInterval range{};        // range the chain was searched on
  std::int64_t grid_points = 0;  // samples of the scan over `range`

  bool succeeded() const { return reason == ChainFailureReason::none; }
  double min_gap() const;
};

enum class VerdictLabel { kind1, kind2, kind3, sensitive_only, insensitive, inconclusive };
std::string_view to_string(VerdictLabel l);

/// One pair (alpha, beta) examined for a dependence property.
struct PairEvidence {
  Parameter alpha = Parameter::untagged(0.0);
  Parameter beta = Parameter::untagged(0.0);
  std::optional<Parameter> chi;  // weak searches: neighbourhood centre
  double radius = 0.0;           // weak searches: neighbourhood radius
  WindowChain chain;
  int attempts = 1;              // beta candidates tried
  bool commensurable = false;
  std::string note;
};

struct DependenceResult {
  WindowKind kind = WindowKind::cross;
  Strength strength = Strength::weak;
  bool holds = false;
  double mu_estimate = 0.0;
  bool resolution_limited = false;
  std::vector<PairEvidence> evidence;
  std::vector<std::string> failures;
};

struct SensitivityWitness {
  Parameter x = Parameter::untagged(0.0);
  Parameter y = Parameter::untagged(0.0);
  double radius = 0.0;
  double z = 0.0;
  double value = 0.0;
};

struct SensitivityResult {
  bool holds = false;
  double lambda_estimate = 0.0;
  std::optional<double> lambda_requested;
  std::vector<SensitivityWitness> witnesses;
  std::optional<Parameter> failing_x;
};

struct Verdict {
  VerdictLabel label = VerdictLabel::inconclusive;
  double mu_estimate = 0.0;
  std::vector<PairEvidence> evidence;  // cross chains then disjoint chains
  ScanConfig config_used;
  Strength strength = Strength::weak;
  RealInterval scan_range{};
  DependenceResult cross;
  DependenceResult disjoint;
  SensitivityResult sensitivity;
  std::vector<std::string> notes;
};

}  // namespace chaoscope
