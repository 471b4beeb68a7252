#include "chaoscope/config.hpp"

#include <cmath>
#include <string>

#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

std::vector<double> ScanConfig::ladder() const {
  std::vector<double> levels;
  levels.reserve(static_cast<std::size_t>(ladder_depth));
  double eps = eps_top;
  for (int k = 0; k < ladder_depth; ++k) {
    levels.push_back(eps);
    eps *= eps_ratio;
  }
  return levels;
}

double ScanConfig::smallest_level() const {
  return eps_top * std::pow(eps_ratio, ladder_depth - 1);
}

void ScanConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid ScanConfig: " + what); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be > 0");
  };
  if (grid_points < 16) fail("grid_points must be >= 16");
  positive(eps_top, "eps_top");
  if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) fail("eps_ratio must lie in (0,1)");
  if (ladder_depth < 2) fail("ladder_depth must be >= 2");
  positive(tol_eq, "tol_eq");
  positive(tol_zero, "tol_zero");
  if (refine_iters < 1) fail("refine_iters must be >= 1");
  positive(mu_min, "mu_min");
  if (pair_samples < 1) fail("pair_samples must be >= 1");
  if (!(nbhd_shrink > 0.0 && nbhd_shrink < 1.0)) fail("nbhd_shrink must lie in (0,1)");
  if (tail_start < 0) fail("tail_start must be >= 0");
  if (tail_len < 1) fail("tail_len must be >= 1");
  if (nbhd_levels < 1) fail("nbhd_levels must be >= 1");
  if (beta_attempts < 1) fail("beta_attempts must be >= 1");
  if (!(range_cap >= 1.0)) fail("range_cap must be >= 1");
  positive(tol_liminf, "tol_liminf");
  if (du_samples < 1) fail("du_samples must be >= 1");
  if (du_grid < 2) fail("du_grid must be >= 2");
  if (battery_terms < 4) fail("battery_terms must be >= 4");
  if (!(disorder_fraction > 0.0 && disorder_fraction <= 1.0)) fail("disorder_fraction must lie in (0,1]");
  if (!(boundary_margin > 0.0 && boundary_margin < 0.01)) fail("boundary_margin must lie in (0,0.01)");
  if (omega_samples < 1) fail("omega_samples must be >= 1");
  const double limit = smallest_level() / 4.0;
  if (!(tol_eq < limit)) {
    fail("tol_eq must be < smallest ladder level / 4 (tol_eq=" + format_double(tol_eq) +
         ", limit=" + format_double(limit) + ")");
  }
}

ScanConfig default_config() {
  ScanConfig c;
  c.validate();
  return c;
}

}  // namespace chaoscope
