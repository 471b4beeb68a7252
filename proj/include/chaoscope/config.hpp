#pragma once

#include <cstdint>
#include <vector>

namespace chaoscope {

/// Discretization of the continuum quantifiers. "for every eps" becomes a
/// geometric ladder, "for every pair" becomes pair_samples quasi-random
/// pairs, "for every neighbourhood" becomes nbhd_levels radii shrinking by
/// nbhd_shrink. Every report embeds the config it ran with.
struct ScanConfig {
  std::int64_t grid_points = 100000;
  double eps_top = 0.5;
  double eps_ratio = 0.25;
  int ladder_depth = 5;
  double tol_eq = 1e-7;
  double tol_zero = 1e-9;
  int refine_iters = 80;
  double mu_min = 0.05;
  int pair_samples = 16;
  double nbhd_shrink = 0.5;
  std::int64_t tail_start = 10000;
  std::int64_t tail_len = 90000;
  std::uint64_t seed = 0;

  // Knobs beyond the core discretization.
  int nbhd_levels = 3;        // radii per neighbourhood search
  int beta_attempts = 64;     // beta candidates tried inside each neighbourhood
  double range_cap = 8.0;     // max widening factor of a scan range
  double tol_liminf = 1e-3;   // "liminf = 0" band
  int du_samples = 8;         // (x, V) samples for the Du criterion
  int du_grid = 1000;         // y-grid size inside each V
  int battery_terms = 40;     // terms per convergence sequence
  double disorder_fraction = 0.5;
  double boundary_margin = 1e-12;  // closest approach of probes to a domain boundary
  int omega_samples = 10;     // parameter points per family classification

  /// eps_top * eps_ratio^k for k = 0..ladder_depth-1.
  std::vector<double> ladder() const;
  double smallest_level() const;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Validated defaults.
ScanConfig default_config();

}  // namespace chaoscope
