#include "chaoscope/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaoscope/detail/refine.hpp"
#include "chaoscope/detail/sampling.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"
#include "chaoscope/window_scanner.hpp"

namespace chaoscope {

namespace {

// Streams of the seeded low-discrepancy sequences; the pair sampler is
// shared by both window kinds so the two searches see the same pairs.
constexpr std::uint64_t kPairStream = 1;
constexpr std::uint64_t kSensitivityStream = 2;

// A resolution-limited failure stalled this deep or deeper.
constexpr int kResolutionDepth = 3;

Parameter sample_param(const FamilySpec& spec, double v) {
  return spec.requires_tags ? Parameter::transcendental(v) : Parameter::untagged(v);
}

void require_finite(const RealInterval& range) {
  if (!range.is_finite()) throw PreconditionError("scan range " + range.to_string() + " must be finite");
}

// Range doubled `factor` times about its centre, clipped to theta. Open
// theta ends are never approached beyond the original range.
RealInterval widen(const RealInterval& range, const RealInterval& theta, double factor) {
  const double half = 0.5 * range.width() * factor;
  double lo = range.center() - half;
  double hi = range.center() + half;
  if (lo < theta.lo || (theta.lo_open && lo <= theta.lo)) lo = theta.lo_open ? range.lo : theta.lo;
  if (hi > theta.hi || (theta.hi_open && hi >= theta.hi)) hi = theta.hi_open ? range.hi : theta.hi;
  return RealInterval::closed(lo, hi);
}

// beta replaced by alpha * p / q, q <= 6, p / q != 1, closest to beta / alpha.
std::optional<std::pair<Parameter, std::string>> snap_commensurable(const FamilySpec& spec, const Parameter& alpha,
                                                                    double beta) {
  if (alpha.value() == 0.0) return std::nullopt;
  const double ratio = beta / alpha.value();
  double best_err = std::numeric_limits<double>::infinity();
  std::int64_t bp = 0;
  std::int64_t bq = 1;
  for (std::int64_t q = 1; q <= 6; ++q) {
    const auto p = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(q)));
    if (p == q || p == 0) continue;
    const double err = std::abs(ratio - static_cast<double>(p) / static_cast<double>(q));
    if (err < best_err) {
      best_err = err;
      bp = p;
      bq = q;
    }
  }
  if (bp == 0) return std::nullopt;
  const double v = alpha.value() * static_cast<double>(bp) / static_cast<double>(bq);
  if (!spec.omega.contains(v)) return std::nullopt;
  const Parameter r = Parameter::rational(bp, bq);
  return std::pair{sample_param(spec, v), "commensurable: beta / alpha = " + r.to_literal()};
}

class DependenceSearch {
 public:
  DependenceSearch(const FamilySpec& spec, WindowKind kind, const ScanConfig& cfg, const RealInterval& range,
                   const DependenceOptions& opts)
      : spec_(spec), kind_(kind), cfg_(cfg), range_(range), opts_(opts) {}

  // Tries each beta in turn, then widens the scan range for the two
  // deepest stalled chains. Returns the first success or the deepest failure.
  PairEvidence search(const Parameter& alpha, const std::vector<std::pair<Parameter, std::string>>& betas) {
    PairEvidence best;
    best.alpha = alpha;
    best.commensurable = opts_.commensurable;
    best.attempts = 0;
    bool have = false;
    std::vector<std::pair<Parameter, WindowChain>> stalled;
    for (const auto& [beta, note] : betas) {
      WindowChain chain = build_chain(spec_, alpha, beta, kind_, range_, cfg_);
      ++best.attempts;
      const bool better = !have || chain.deepest_level > best.chain.deepest_level;
      if (chain.succeeded() || better) {
        best.beta = beta;
        best.note = note;
        best.chain = chain;
        have = true;
      }
      if (chain.succeeded()) return best;
      if (chain.deepest_level >= 1) stalled.emplace_back(beta, std::move(chain));
    }
    std::stable_sort(stalled.begin(), stalled.end(),
                     [](const auto& a, const auto& b) { return a.second.deepest_level > b.second.deepest_level; });
    if (stalled.size() > 2) stalled.erase(stalled.begin() + 2, stalled.end());
    for (const auto& [beta, first] : stalled) {
      RealInterval prev = range_;
      for (double factor = 2.0; factor <= cfg_.range_cap; factor *= 2.0) {
        const RealInterval wider = widen(range_, spec_.theta, factor);
        if (wider == prev) break;
        prev = wider;
        const auto n = static_cast<std::int64_t>(
            std::llround(static_cast<double>(cfg_.grid_points) * wider.width() / range_.width()));
        PairScan scan(spec_, alpha, beta, wider, cfg_, n);
        WindowChain chain = build_chain(scan, kind_);
        ++best.attempts;
        if (chain.succeeded() || chain.deepest_level > best.chain.deepest_level) {
          best.beta = beta;
          best.chain = chain;
          best.note = "range widened x" + format_double(factor);
        }
        if (chain.succeeded()) return best;
      }
    }
    return best;
  }

 private:
  const FamilySpec& spec_;
  WindowKind kind_;
  const ScanConfig& cfg_;
  RealInterval range_;
  DependenceOptions opts_;
};

// Records a failed pair and stops the search.
void fail(DependenceResult& res, PairEvidence ev, const std::string& what) {
  const auto& ch = ev.chain;
  res.holds = false;
  res.resolution_limited = ch.deepest_level >= kResolutionDepth;
  std::string msg = what + ": alpha = " + ev.alpha.to_literal() + ", beta = " + ev.beta.to_literal() + ", " +
                    std::string(to_string(ch.reason)) + " at eps = " + format_double(ch.failed_eps) +
                    " after depth " + std::to_string(ch.deepest_level);
  if (res.resolution_limited) msg += " (resolution-limited)";
  res.failures.push_back(std::move(msg));
  res.evidence.push_back(std::move(ev));
}

void finish(DependenceResult& res, const ScanConfig& cfg) {
  double mu = std::numeric_limits<double>::infinity();
  for (const auto& ev : res.evidence) mu = std::min(mu, ev.chain.min_gap());
  res.mu_estimate = std::isfinite(mu) ? mu : 0.0;
  res.holds = res.mu_estimate > cfg.mu_min;
  if (!res.holds) {
    res.failures.push_back("mu_estimate " + format_double(res.mu_estimate) + " does not exceed mu_min " +
                           format_double(cfg.mu_min));
  }
}

}  // namespace

SensitivityResult check_sensitive(const FamilySpec& spec, const ScanConfig& config, const RealInterval& scan_range,
                                  std::optional<double> lambda) {
  config.validate();
  require_finite(scan_range);
  if (!spec.theta.contains(scan_range)) {
    throw PreconditionError("scan range " + scan_range.to_string() + " is not inside theta of " + spec.id);
  }
  if (lambda && !(*lambda > 0.0)) throw PreconditionError("lambda must be positive");
  SensitivityResult res;
  res.lambda_requested = lambda;
  res.lambda_estimate = std::numeric_limits<double>::infinity();
  const RealInterval& so = spec.sample_omega;
  const double diam = so.width();
  const detail::R2 seq(config.seed, kSensitivityStream);
  const std::int64_t n = config.grid_points;
  const double step = scan_range.width() / static_cast<double>(n - 1);
  bool all_ok = true;
  for (int i = 0; i < config.pair_samples; ++i) {
    const Parameter x = sample_param(spec, so.lo + seq.at(i).first * diam);
    double r = 0.25 * diam;
    for (int k = 0; k < config.ladder_depth; ++k, r *= config.nbhd_shrink) {
      SensitivityWitness best{x, x, r, scan_range.lo, -1.0};
      for (double sgn : {1.0, -1.0}) {
        const double yv = x.value() + sgn * 0.9 * r;
        if (!spec.omega.contains(yv)) continue;
        const Parameter y = sample_param(spec, yv);
        auto absd = [&](double z) { return eval_diff(spec, x, y, z); };
        std::int64_t arg = 0;
        double top = -1.0;
        for (std::int64_t j = 0; j < n; ++j) {
          const double z = j + 1 == n ? scan_range.hi : scan_range.lo + step * static_cast<double>(j);
          const double v = absd(z);
          if (v > top) top = v, arg = j;
        }
        double zbest = scan_range.lo + step * static_cast<double>(arg);
        if (arg > 0 && arg + 1 < n) {
          auto [zm, vm] = detail::golden_min([&](double z) { return -absd(z); }, zbest - step, zbest + step,
                                             config.refine_iters);
          if (-vm > top) top = -vm, zbest = zm;
        }
        if (top > best.value) best = {x, y, r, zbest, top};
      }
      if (best.value < 0.0) continue;  // no y of this radius inside omega
      res.lambda_estimate = std::min(res.lambda_estimate, best.value);
      const double bar = lambda.value_or(config.mu_min);
      if (!(best.value > bar) && all_ok) {
        all_ok = false;
        res.failing_x = x;
      }
      res.witnesses.push_back(best);
    }
  }
  if (!std::isfinite(res.lambda_estimate)) res.lambda_estimate = 0.0;
  res.holds = all_ok && !res.witnesses.empty();
  return res;
}

DependenceResult check_dependence(const FamilySpec& spec, WindowKind kind, Strength strength,
                                  const ScanConfig& config, const RealInterval& scan_range,
                                  const DependenceOptions& options) {
  config.validate();
  require_finite(scan_range);
  DependenceResult res;
  res.kind = kind;
  res.strength = strength;
  const RealInterval& so = spec.sample_omega;
  const double diam = so.width();
  const detail::R2 seq(config.seed, kPairStream);
  DependenceSearch search(spec, kind, config, scan_range, options);

  auto make_beta = [&](const Parameter& alpha, double bv) -> std::optional<std::pair<Parameter, std::string>> {
    if (!spec.omega.contains(bv) || bv == alpha.value()) return std::nullopt;
    if (options.commensurable) return snap_commensurable(spec, alpha, bv);
    return std::pair{sample_param(spec, bv), std::string()};
  };

  if (strength == Strength::strong) {
    // Faraway separations first, then close ones shrinking like the
    // weak neighbourhoods.
    std::vector<double> seps = {0.25 * diam, 0.5 * diam, diam};
    double s = 0.25 * diam;
    for (int k = 0; k < config.nbhd_levels; ++k) seps.push_back(s *= config.nbhd_shrink);
    std::vector<std::pair<double, double>> done;
    for (int i = 0; i < config.pair_samples; ++i) {
      const double sep = seps[static_cast<std::size_t>(i) % seps.size()];
      const double av = so.lo + seq.at(i).first * (diam - sep);
      const Parameter alpha = sample_param(spec, av);
      auto beta = make_beta(alpha, av + sep);
      if (!beta) continue;
      const std::pair<double, double> key{alpha.value(), beta->first.value()};
      if (std::find(done.begin(), done.end(), key) != done.end()) continue;
      done.push_back(key);
      PairEvidence ev = search.search(alpha, {*beta});
      ev.radius = sep;
      if (!ev.chain.succeeded()) {
        fail(res, std::move(ev), "pair did not chain");
        return res;
      }
      res.evidence.push_back(std::move(ev));
    }
  } else {
    for (int i = 0; i < config.pair_samples; ++i) {
      const auto [u1, u2] = seq.at(i);
      const Parameter alpha = sample_param(spec, so.lo + u1 * diam);
      const Parameter chi = sample_param(spec, so.lo + u2 * diam);
      double r = 0.25 * diam;
      for (int k = 0; k < config.nbhd_levels; ++k, r *= config.nbhd_shrink) {
        const double c = detail::frac(0.7548776662466927 * (i + 1) + 0.5698402909980532 * (k + 1));
        std::vector<std::pair<Parameter, std::string>> betas;
        for (int j = 0; j < config.beta_attempts; ++j) {
          const double t = 2.0 * detail::frac(c + j * detail::kInvGolden) - 1.0;
          if (auto b = make_beta(alpha, chi.value() + r * t * 0.999)) betas.push_back(std::move(*b));
        }
        PairEvidence ev;
        if (!betas.empty()) {
          ev = search.search(alpha, betas);
        } else {
          ev.alpha = alpha;
          ev.beta = alpha;
          ev.attempts = 0;
          ev.chain.kind = kind;
          ev.chain.reason = ChainFailureReason::no_window;
          ev.chain.failed_eps = config.eps_top;
          ev.chain.range = scan_range;
          ev.note = "no admissible beta in the neighbourhood";
        }
        ev.chi = chi;
        ev.radius = r;
        if (!ev.chain.succeeded()) {
          fail(res, std::move(ev), "no beta in the neighbourhood chained");
          return res;
        }
        res.evidence.push_back(std::move(ev));
      }
    }
  }
  if (res.evidence.empty()) {
    res.failures.push_back("no admissible pair was sampled");
    return res;
  }
  finish(res, config);
  return res;
}

VerdictLabel label_for(bool cross, bool disjoint, bool sensitive) {
  if (cross && disjoint) return VerdictLabel::kind3;
  if (cross) return VerdictLabel::kind1;
  if (disjoint) return VerdictLabel::kind2;
  return sensitive ? VerdictLabel::sensitive_only : VerdictLabel::insensitive;
}

Verdict classify_kind(const FamilySpec& spec, const ScanConfig& config, const RealInterval& scan_range,
                      Strength strength, const DependenceOptions& options) {
  Verdict v;
  v.config_used = config;
  v.strength = strength;
  v.scan_range = scan_range;
  v.cross = check_dependence(spec, WindowKind::cross, strength, config, scan_range, options);
  v.disjoint = check_dependence(spec, WindowKind::disjoint, strength, config, scan_range, options);
  v.sensitivity = check_sensitive(spec, config, scan_range);
  v.label = label_for(v.cross.holds, v.disjoint.holds, v.sensitivity.holds);
  for (const auto* r : {&v.cross, &v.disjoint}) {
    if (!r->holds && r->resolution_limited) {
      v.label = VerdictLabel::inconclusive;
      v.notes.push_back(std::string(to_string(r->kind)) +
                        " search stalled deep in the ladder; a finer grid or wider range may decide it");
    }
  }
  switch (v.label) {
    case VerdictLabel::kind1: v.mu_estimate = v.cross.mu_estimate; break;
    case VerdictLabel::kind2: v.mu_estimate = v.disjoint.mu_estimate; break;
    case VerdictLabel::kind3: v.mu_estimate = std::min(v.cross.mu_estimate, v.disjoint.mu_estimate); break;
    default: v.mu_estimate = 0.0; break;
  }
  v.evidence = v.cross.evidence;
  v.evidence.insert(v.evidence.end(), v.disjoint.evidence.begin(), v.disjoint.evidence.end());
  if (options.commensurable) v.notes.push_back("beta snapped to commensurable ratios alpha * p / q, q <= 6");
  return v;
}

ReplayResult replay_evidence(const FamilySpec& spec, const std::vector<PairEvidence>& evidence,
                             const ScanConfig& config, int density) {
  ReplayResult out;
  for (const auto& ev : evidence) {
    const auto& ch = ev.chain;
    const std::string who = "alpha = " + ev.alpha.to_literal() + ", beta = " + ev.beta.to_literal();
    const double spacing = ch.range.width() / static_cast<double>(std::max<std::int64_t>(ch.grid_points - 1, 1));
    for (std::size_t i = 0; i < ch.windows.size(); ++i) {
      const Window& w = ch.windows[i];
      const auto samples = std::max<std::int64_t>(
          3, static_cast<std::int64_t>(std::ceil(density * (w.y1 - w.x1) / spacing)) + 1);
      ++out.windows_checked;
      if (!revalidate_window(spec, ev.alpha, ev.beta, w, config, samples)) {
        out.failures.push_back(who + ": window " + std::to_string(i) + " [" + format_double(w.x1) + ", " +
                               format_double(w.y1) + "] fails re-validation");
      }
      if (i > 0 && !(w.eps < ch.windows[i - 1].eps)) {
        out.failures.push_back(who + ": eps not strictly decreasing at window " + std::to_string(i));
      }
    }
    for (std::size_t i = 0; i < ch.gaps.size(); ++i) {
      const GapWitness& g = ch.gaps[i];
      ++out.gaps_checked;
      const double v = eval_diff(spec, ev.alpha, ev.beta, g.w);
      if (!(g.gap_lo <= g.w && g.w <= g.gap_hi) || v != g.value || !(v > ch.mu_candidate)) {
        out.failures.push_back(who + ": gap witness " + std::to_string(i) + " at " + format_double(g.w) +
                               " does not reproduce");
      }
    }
  }
  return out;
}

}  // namespace chaoscope
