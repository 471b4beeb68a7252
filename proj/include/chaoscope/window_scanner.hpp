#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "chaoscope/config.hpp"
#include "chaoscope/families.hpp"
#include "chaoscope/model.hpp"

namespace chaoscope {

/// A zero of d = psi_alpha - psi_beta. Tangential zeros touch 0 without a
/// sign change and are only reported when |d| there is <= tol_zero.
struct Crossing {
  double z = 0.0;
  bool tangential = false;
  double residual = 0.0;  // |d(z)|
};

/// d = psi_alpha - psi_beta sampled once on a uniform grid over a finite
/// range, with the refinements every window query shares: crossings,
/// cross-window interior extrema, and a range-maximum table over |d|.
class PairScan {
 public:
  /// `grid_points` overrides config.grid_points (used when a range is
  /// widened at constant density). Throws PreconditionError when the range
  /// is not a finite subset of theta or a parameter lies outside omega.
  PairScan(const FamilySpec& spec, Parameter alpha, Parameter beta, RealInterval range,
           const ScanConfig& config, std::optional<std::int64_t> grid_points = std::nullopt);
  ~PairScan();
  PairScan(PairScan&&) noexcept;
  PairScan& operator=(PairScan&&) noexcept;

  const FamilySpec& spec() const;
  const Parameter& alpha() const;
  const Parameter& beta() const;
  const RealInterval& range() const;
  const ScanConfig& config() const;
  bool identical_pair() const;

  std::span<const double> grid() const;
  std::span<const double> samples() const;  // signed d at grid()

  /// Signed d(z), evaluation errors carry the failing moment.
  double diff(double z) const;

  /// Sorted refined zeros of d. Empty for identical parameters and when d
  /// vanishes at every grid sample (no zero is isolated).
  const std::vector<Crossing>& crossings() const;

  /// Maximal windows of the given kind at level eps, ascending in x1.
  std::vector<Window> windows(WindowKind kind, double eps) const;

  /// Grid-refined maximiser of |d| on the closed gap between two disjoint
  /// windows. Throws PreconditionError when they overlap.
  GapWitness gap(const Window& first, const Window& second) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Refined zeros of d on `range`. Requires alpha != beta.
std::vector<Crossing> scan_crossings(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                                     const RealInterval& range, const ScanConfig& config);

std::vector<Window> find_windows(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                                 double eps, WindowKind kind, const RealInterval& range,
                                 const ScanConfig& config);

/// Walks the eps ladder from eps_top, picking at each level a window
/// disjoint from all earlier picks whose gap to the previous pick rises
/// above mu_min. On failure the chain holds the windows found so far and
/// the reason the next level could not be served.
WindowChain build_chain(const PairScan& scan, WindowKind kind);
WindowChain build_chain(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                        WindowKind kind, const RealInterval& range, const ScanConfig& config);

/// Standalone gap witness: the closed gap is sampled with grid_points
/// points and the best sample refined.
GapWitness gap_separation(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                          const Window& first, const Window& second, const ScanConfig& config);

/// Re-checks a window's boundary and interior conditions on a fresh
/// uniform grid of `samples` points over [x1, y1]; boundary tolerances and
/// the eps bound are relaxed by `tol_scale` times tol_eq / tol_zero.
bool revalidate_window(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, const Window& w,
                       const ScanConfig& config, std::int64_t samples, double tol_scale = 2.0);

}  // namespace chaoscope
