#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/families.hpp"
#include "chaoscope/model.hpp"

namespace chaoscope {

/// Searches, for sampled x and shrinking radii r, a y with |x - y| < r and
/// a moment z in scan_range maximising |psi_x(z) - psi_y(z)|.
/// lambda_estimate is the smallest of those maxima. With `lambda` the
/// check holds iff every (x, r) beats it; without, iff the estimate beats
/// config.mu_min.
SensitivityResult check_sensitive(const FamilySpec& spec, const ScanConfig& config, const RealInterval& scan_range,
                                  std::optional<double> lambda = std::nullopt);

struct DependenceOptions {
  /// Snap every beta to alpha * p / q with q <= 6 (periodic pairs for sin_ax).
  bool commensurable = false;
};

/// Strong: a chain for each of pair_samples pairs, close and faraway.
/// Weak: for sampled (alpha, chi) and each of nbhd_levels shrinking
/// neighbourhoods of chi, some beta in the neighbourhood must chain.
/// Stops at the first failed pair; that failure is the last evidence entry.
DependenceResult check_dependence(const FamilySpec& spec, WindowKind kind, Strength strength,
                                  const ScanConfig& config, const RealInterval& scan_range,
                                  const DependenceOptions& options = {});

/// The kind truth table. Resolution limits are handled by classify_kind.
VerdictLabel label_for(bool cross, bool disjoint, bool sensitive);

Verdict classify_kind(const FamilySpec& spec, const ScanConfig& config, const RealInterval& scan_range,
                      Strength strength = Strength::weak, const DependenceOptions& options = {});

struct ReplayResult {
  int windows_checked = 0;
  int gaps_checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Re-validates every recorded window on an independent grid `density`
/// times denser than the scan grid, and re-evaluates every gap witness.
ReplayResult replay_evidence(const FamilySpec& spec, const std::vector<PairEvidence>& evidence,
                             const ScanConfig& config, int density = 10);

}  // namespace chaoscope
