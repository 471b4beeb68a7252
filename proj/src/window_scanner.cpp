#include "chaoscope/window_scanner.hpp"

#include <algorithm>
#include <cmath>

#include "chaoscope/detail/refine.hpp"
#include "chaoscope/errors.hpp"

namespace chaoscope {

namespace {

void check_inputs(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, const RealInterval& range) {
  if (!range.is_finite()) throw PreconditionError("scan range " + range.to_string() + " must be finite");
  if (!spec.theta.contains(range)) {
    throw PreconditionError("scan range " + range.to_string() + " is not inside theta " + spec.theta.to_string() +
                            " of " + spec.id);
  }
  for (const Parameter* p : {&alpha, &beta}) {
    if (!spec.omega.contains(p->value())) {
      throw PreconditionError("parameter " + p->to_literal() + " outside omega " + spec.omega.to_string() + " of " +
                              spec.id);
    }
    if (spec.requires_tags && !p->is_tagged()) {
      throw PreconditionError(spec.id + " needs tagged parameters, got " + p->to_literal());
    }
  }
}

// Closed intervals meet (chained windows must not).
bool overlaps(const Window& a, const Window& b) { return !(a.y1 < b.x1 || b.y1 < a.x1); }

// Open interiors meet (a gap needs at most a shared boundary point).
bool interiors_overlap(const Window& a, const Window& b) { return a.y1 > b.x1 && b.y1 > a.x1; }

// Cross-window interior statistics between two consecutive crossings.
struct Interior {
  double min = 0.0;
  double max = 0.0;
};

}  // namespace

struct PairScan::Impl {
  FamilySpec spec;
  Parameter alpha;
  Parameter beta;
  RealInterval range;
  ScanConfig cfg;
  bool identical = false;
  bool flat = false;  // d is exactly 0 at every sample: no isolated zeros
  std::vector<double> z;
  std::vector<double> d;
  mutable std::optional<std::vector<Crossing>> crossings;
  mutable std::vector<Interior> cross_interiors;

  double diff(double t) const { return eval_signed_diff(spec, alpha, beta, t); }
  double absdiff(double t) const { return std::abs(diff(t)); }

  // First grid index with z > t, and first with z >= t.
  std::size_t after(double t) const { return static_cast<std::size_t>(std::upper_bound(z.begin(), z.end(), t) - z.begin()); }
  std::size_t from(double t) const { return static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), t) - z.begin()); }

  // Max of |d| over grid samples strictly inside (lo, hi), refined between
  // the argmax's neighbours (the window ends stand in for missing ones).
  // The min is refined only when both neighbours are interior samples, since
  // |d| may fall toward the ends.
  std::pair<double, double> interior_max(double lo, double hi) const {
    const std::size_t i0 = after(lo);
    const std::size_t i1 = from(hi);  // exclusive
    auto neg = [this](double t) { return -absdiff(t); };
    if (i0 >= i1) {
      auto [w, v] = detail::golden_min(neg, lo, hi, cfg.refine_iters, false);
      return {w, -v};
    }
    std::size_t k = i0;
    for (std::size_t i = i0; i < i1; ++i) {
      if (std::abs(d[i]) > std::abs(d[k])) k = i;
    }
    std::pair<double, double> best{z[k], std::abs(d[k])};
    const double a = k > i0 ? z[k - 1] : lo;
    const double b = k + 1 < i1 ? z[k + 1] : hi;
    auto [w, v] = detail::golden_min(neg, a, b, cfg.refine_iters, false);
    if (-v > best.second) best = {w, -v};
    return best;
  }

  std::pair<double, double> interior_min(double lo, double hi) const {
    const std::size_t i0 = after(lo);
    const std::size_t i1 = from(hi);
    auto absf = [this](double t) { return absdiff(t); };
    if (i0 >= i1) return detail::golden_min(absf, lo, hi, cfg.refine_iters, false);
    std::size_t k = i0;
    for (std::size_t i = i0; i < i1; ++i) {
      if (std::abs(d[i]) < std::abs(d[k])) k = i;
    }
    std::pair<double, double> best{z[k], std::abs(d[k])};
    if (k > i0 && k + 1 < i1) {
      auto [w, v] = detail::golden_min(absf, z[k - 1], z[k + 1], cfg.refine_iters, false);
      if (v < best.second) best = {w, v};
    }
    return best;
  }

  const std::vector<Crossing>& get_crossings() const {
    if (crossings) return *crossings;
    std::vector<Crossing> out;
    if (!identical && !flat) {
      auto f = [this](double t) { return diff(t); };
      for (const auto& hit : detail::refined_roots(z, d, f, cfg.refine_iters, cfg.tol_zero)) {
        out.push_back({hit.z, hit.tangential, std::abs(diff(hit.z))});
      }
    }
    cross_interiors.clear();
    for (std::size_t j = 0; j + 1 < out.size(); ++j) {
      const double lo = out[j].z;
      const double hi = out[j + 1].z;
      cross_interiors.push_back({interior_min(lo, hi).second, interior_max(lo, hi).second});
    }
    crossings = std::move(out);
    return *crossings;
  }

  bool crossing_in(double lo, double hi) const {
    const auto& cs = get_crossings();
    auto it = std::lower_bound(cs.begin(), cs.end(), lo, [](const Crossing& c, double v) { return c.z < v; });
    return it != cs.end() && it->z <= hi;
  }

  std::vector<Window> cross_windows(double eps) const {
    const auto& cs = get_crossings();
    std::vector<Window> out;
    for (std::size_t j = 0; j + 1 < cs.size(); ++j) {
      const Interior& in = cross_interiors[j];
      if (cs[j].residual > cfg.tol_zero || cs[j + 1].residual > cfg.tol_zero) continue;
      if (!(in.max < eps) || !(in.min > 0.0)) continue;
      out.push_back({WindowKind::cross, cs[j].z, cs[j + 1].z, eps, in.min, in.max, cs[j].residual, cs[j + 1].residual});
    }
    return out;
  }

  std::vector<Window> disjoint_windows(double eps) const {
    std::vector<double> g(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) g[i] = std::abs(d[i]) - eps;
    auto gf = [this, eps](double t) { return absdiff(t) - eps; };
    const auto roots = detail::refined_roots(z, g, gf, cfg.refine_iters, cfg.tol_eq);
    std::vector<Window> out;
    for (std::size_t j = 0; j + 1 < roots.size(); ++j) {
      const double lo = roots[j].z;
      const double hi = roots[j + 1].z;
      if (!(lo < hi)) continue;
      // Which side of the level the interior sits on.
      const std::size_t i0 = after(lo);
      const double probe = (i0 < z.size() && z[i0] < hi) ? std::abs(d[i0]) : absdiff(lo + 0.5 * (hi - lo));
      if (!(probe < eps)) continue;
      if (crossing_in(lo, hi)) continue;
      const double bx = absdiff(lo);
      const double by = absdiff(hi);
      if (std::abs(bx - eps) > cfg.tol_eq || std::abs(by - eps) > cfg.tol_eq) continue;
      const double mn = interior_min(lo, hi).second;
      if (!(mn > cfg.tol_zero)) continue;
      const double mx = interior_max(lo, hi).second;
      if (!(mx < eps)) continue;
      out.push_back({WindowKind::disjoint, lo, hi, eps, mn, mx, bx, by});
    }
    return out;
  }
};

PairScan::PairScan(const FamilySpec& spec, Parameter alpha, Parameter beta, RealInterval range,
                   const ScanConfig& config, std::optional<std::int64_t> grid_points)
    : impl_(std::make_unique<Impl>(Impl{spec, alpha, beta, range, config, false, false, {}, {}, std::nullopt, {}})) {
  config.validate();
  check_inputs(spec, alpha, beta, range);
  const std::int64_t n = grid_points.value_or(config.grid_points);
  if (n < 2) throw PreconditionError("a scan needs at least 2 grid points");
  auto& im = *impl_;
  im.identical = alpha == beta;
  im.z.resize(static_cast<std::size_t>(n));
  im.d.resize(static_cast<std::size_t>(n));
  const double step = (range.hi - range.lo) / static_cast<double>(n - 1);
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = i + 1 == n ? range.hi : range.lo + step * static_cast<double>(i);
    im.z[static_cast<std::size_t>(i)] = t;
    im.d[static_cast<std::size_t>(i)] = im.identical ? 0.0 : im.diff(t);
  }
  im.flat = std::all_of(im.d.begin(), im.d.end(), [](double v) { return v == 0.0; });
}

PairScan::~PairScan() = default;
PairScan::PairScan(PairScan&&) noexcept = default;
PairScan& PairScan::operator=(PairScan&&) noexcept = default;

const FamilySpec& PairScan::spec() const { return impl_->spec; }
const Parameter& PairScan::alpha() const { return impl_->alpha; }
const Parameter& PairScan::beta() const { return impl_->beta; }
const RealInterval& PairScan::range() const { return impl_->range; }
const ScanConfig& PairScan::config() const { return impl_->cfg; }
bool PairScan::identical_pair() const { return impl_->identical; }
std::span<const double> PairScan::grid() const { return impl_->z; }
std::span<const double> PairScan::samples() const { return impl_->d; }
double PairScan::diff(double z) const { return impl_->diff(z); }
const std::vector<Crossing>& PairScan::crossings() const { return impl_->get_crossings(); }

std::vector<Window> PairScan::windows(WindowKind kind, double eps) const {
  if (!(eps > 0.0)) throw PreconditionError("window level eps must be positive");
  if (impl_->identical || impl_->flat) return {};
  return kind == WindowKind::cross ? impl_->cross_windows(eps) : impl_->disjoint_windows(eps);
}

GapWitness PairScan::gap(const Window& first, const Window& second) const {
  if (interiors_overlap(first, second)) throw PreconditionError("gap between overlapping windows");
  const Window& left = first.x1 <= second.x1 ? first : second;
  const Window& right = first.x1 <= second.x1 ? second : first;
  const double lo = left.y1;
  const double hi = right.x1;
  const auto& im = *impl_;
  GapWitness out{lo, im.absdiff(lo), lo, hi};
  const double vhi = im.absdiff(hi);
  if (vhi > out.value) out.w = hi, out.value = vhi;
  auto [w, v] = im.interior_max(lo, hi);
  if (v > out.value) out.w = w, out.value = v;
  return out;
}

std::vector<Crossing> scan_crossings(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                                     const RealInterval& range, const ScanConfig& config) {
  if (alpha == beta) throw PreconditionError("scan_crossings needs alpha != beta");
  PairScan scan(spec, alpha, beta, range, config);
  return scan.crossings();
}

std::vector<Window> find_windows(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, double eps,
                                 WindowKind kind, const RealInterval& range, const ScanConfig& config) {
  if (alpha == beta) {
    check_inputs(spec, alpha, beta, range);
    return {};
  }
  PairScan scan(spec, alpha, beta, range, config);
  return scan.windows(kind, eps);
}

WindowChain build_chain(const PairScan& scan, WindowKind kind) {
  const ScanConfig& cfg = scan.config();
  WindowChain chain;
  chain.kind = kind;
  chain.mu_candidate = cfg.mu_min;
  chain.range = scan.range();
  chain.grid_points = static_cast<std::int64_t>(scan.grid().size());
  for (double eps : cfg.ladder()) {
    auto cands = scan.windows(kind, eps);
    if (cands.empty()) {
      chain.reason = ChainFailureReason::no_window;
      chain.failed_eps = eps;
      break;
    }
    std::erase_if(cands, [&](const Window& c) {
      return std::any_of(chain.windows.begin(), chain.windows.end(), [&](const Window& w) { return overlaps(w, c); });
    });
    if (cands.empty()) {
      chain.reason = ChainFailureReason::no_disjoint_window;
      chain.failed_eps = eps;
      break;
    }
    // Cross windows: prefer the largest excursion inside the window, so the
    // window survives; disjoint windows: the one farthest from touching.
    std::stable_sort(cands.begin(), cands.end(), [kind](const Window& a, const Window& b) {
      return kind == WindowKind::cross ? a.interior_max > b.interior_max : a.interior_min > b.interior_min;
    });
    bool placed = false;
    for (const Window& c : cands) {
      if (chain.windows.empty()) {
        chain.windows.push_back(c);
        placed = true;
        break;
      }
      GapWitness g = scan.gap(chain.windows.back(), c);
      if (g.value > chain.mu_candidate) {
        chain.windows.push_back(c);
        chain.gaps.push_back(g);
        placed = true;
        break;
      }
    }
    if (!placed) {
      chain.reason = ChainFailureReason::gap_too_small;
      chain.failed_eps = eps;
      break;
    }
  }
  chain.deepest_level = static_cast<int>(chain.windows.size());
  return chain;
}

WindowChain build_chain(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, WindowKind kind,
                        const RealInterval& range, const ScanConfig& config) {
  PairScan scan(spec, alpha, beta, range, config);
  return build_chain(scan, kind);
}

GapWitness gap_separation(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta,
                          const Window& first, const Window& second, const ScanConfig& config) {
  if (interiors_overlap(first, second)) throw PreconditionError("gap between overlapping windows");
  const double lo = std::min(first.y1, second.y1);
  const double hi = std::max(first.x1, second.x1);
  auto absd = [&](double t) { return eval_diff(spec, alpha, beta, t); };
  const std::int64_t n = std::max<std::int64_t>(config.grid_points, 2);
  GapWitness out{lo, absd(lo), lo, hi};
  std::int64_t best = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    const double t = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = absd(t);
    if (v > out.value) {
      out.w = t;
      out.value = v;
      best = i;
    }
  }
  if (best > 0 && best + 1 < n) {
    const double a = lo + (hi - lo) * static_cast<double>(best - 1) / static_cast<double>(n - 1);
    const double b = lo + (hi - lo) * static_cast<double>(best + 1) / static_cast<double>(n - 1);
    auto [w, v] = detail::golden_min([&](double t) { return -absd(t); }, a, b, config.refine_iters);
    if (-v > out.value) out.w = w, out.value = -v;
  }
  return out;
}

bool revalidate_window(const FamilySpec& spec, const Parameter& alpha, const Parameter& beta, const Window& w,
                       const ScanConfig& config, std::int64_t samples, double tol_scale) {
  if (samples < 3) throw PreconditionError("revalidation needs at least 3 samples");
  auto absd = [&](double t) { return eval_diff(spec, alpha, beta, t); };
  const double bx = absd(w.x1);
  const double by = absd(w.y1);
  if (w.kind == WindowKind::cross) {
    if (bx > tol_scale * config.tol_zero || by > tol_scale * config.tol_zero) return false;
  } else {
    if (std::abs(bx - w.eps) > tol_scale * config.tol_eq || std::abs(by - w.eps) > tol_scale * config.tol_eq) {
      return false;
    }
  }
  const double bound = w.eps + tol_scale * config.tol_eq;
  for (std::int64_t i = 1; i + 1 < samples; ++i) {
    const double t = w.x1 + (w.y1 - w.x1) * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (t <= w.x1 || t >= w.y1) continue;
    const double v = absd(t);
    if (!(v > 0.0) || !(v < bound)) return false;
  }
  return true;
}

}  // namespace chaoscope
