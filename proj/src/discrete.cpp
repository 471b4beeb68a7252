#include "chaoscope/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chaoscope/detail/refine.hpp"
#include "chaoscope/detail/sampling.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

namespace {

constexpr std::uint64_t kDuStream = 3;
constexpr std::uint64_t k41Stream = 4;
constexpr double kDefaultEpsDiv = 0.1;
constexpr std::int64_t kCommensurableDenominator = 1000;

[[noreturn]] void diverged(const SequenceFamily& fam, const Parameter& x, std::int64_t n) {
  throw Divergence(fam.id + ": u(" + std::to_string(n) + ") is not finite for x = " + x.to_literal());
}

void check_param(const SequenceFamily& fam, const Parameter& x) {
  if (!fam.omega.contains(x.value())) {
    throw DomainError(fam.id + ": parameter " + x.to_literal() + " outside omega " + fam.omega.to_string());
  }
}

Parameter untagged_param(double v) { return Parameter::untagged(v); }

// |u_x(n) - u_y(n)| over the tail, x cached once per search.
std::vector<double> tail_values(const SequenceFamily& fam, const Parameter& x, std::int64_t start, std::int64_t len) {
  std::vector<double> out(static_cast<std::size_t>(len));
  OrbitCursor c(fam, x);
  c.seek(start);
  for (std::int64_t i = 0; i < len; ++i) {
    if (i > 0) c.advance();
    out[static_cast<std::size_t>(i)] = c.value();
  }
  return out;
}

TailStats stats_against(const SequenceFamily& fam, const std::vector<double>& xs, const Parameter& y,
                        std::int64_t start) {
  TailStats s;
  s.n_lo = start;
  s.n_hi = start + static_cast<std::int64_t>(xs.size());
  s.limsup_est = -1.0;
  s.liminf_est = std::numeric_limits<double>::infinity();
  OrbitCursor c(fam, y);
  c.seek(start);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) c.advance();
    const double d = std::abs(xs[i] - c.value());
    const auto n = start + static_cast<std::int64_t>(i);
    if (d > s.limsup_est) s.limsup_est = d, s.argmax_index = n;
    if (d < s.liminf_est) s.liminf_est = d, s.argmin_index = n;
  }
  return s;
}

// Clips an open interval into the sampling region.
RealInterval fit_open(double lo, double hi, const RealInterval& region) {
  const double w = hi - lo;
  if (lo < region.lo) lo = region.lo, hi = region.lo + w;
  if (hi > region.hi) hi = region.hi, lo = region.hi - w;
  return RealInterval::open(lo, hi);
}

}  // namespace

double SequenceFamily::generate(const Parameter& x, std::int64_t n) const {
  if (n < 0) throw PreconditionError("sequence index must be >= 0");
  OrbitCursor c(*this, x);
  c.seek(n);
  return c.value();
}

OrbitCursor::OrbitCursor(const SequenceFamily& fam, Parameter x) : fam_(&fam), x_(x) {
  check_param(fam, x);
  load();
}

void OrbitCursor::load() {
  value_ = fam_->is_iteration() ? fam_->init(x_) : fam_->term(x_, index_);
  if (!std::isfinite(value_)) diverged(*fam_, x_, index_);
}

void OrbitCursor::advance() {
  ++index_;
  value_ = fam_->is_iteration() ? fam_->step(x_, value_) : fam_->term(x_, index_);
  if (!std::isfinite(value_)) diverged(*fam_, x_, index_);
}

void OrbitCursor::seek(std::int64_t n) {
  if (n < index_) {
    if (fam_->is_iteration()) throw PreconditionError("orbit cursors only move forward");
  }
  if (!fam_->is_iteration()) {
    index_ = n;
    load();
    return;
  }
  while (index_ < n) advance();
}

std::vector<SequenceFamily> builtin_sequences() {
  std::vector<SequenceFamily> out;
  {
    SequenceFamily f;
    f.id = "logistic_357";
    f.omega = RealInterval::open(0.0, 1.0);
    f.sample_omega = RealInterval::closed(0.05, 0.95);
    f.notes = "orbit of 3.57 u (1 - u) from u(0) = x";
    f.init = [](const Parameter& x) { return x.value(); };
    f.step = [](const Parameter&, double u) { return 3.57 * u * (1.0 - u); };
    f.make_param = untagged_param;
    out.push_back(std::move(f));
  }
  {
    SequenceFamily f;
    f.id = "sin_drift";
    f.omega = RealInterval::real_line();
    f.sample_omega = RealInterval::closed(0.5, 2.5);
    f.notes = "u_a(n) = sin(a n) - sin(n)";
    f.term = [](const Parameter& a, std::int64_t n) {
      const auto nd = static_cast<double>(n);
      return std::sin(a.value() * nd) - std::sin(nd);
    };
    f.make_param = untagged_param;
    out.push_back(std::move(f));
  }
  {
    SequenceFamily f;
    f.id = "sin_drift_commensurable";
    f.omega = RealInterval::closed(0.0, 2.0);
    f.sample_omega = RealInterval::closed(0.05, 1.95);
    f.notes = "u_r(n) = sin(pi r n) - sin(n) for rational-tagged r, so a = pi r is a rational multiple of pi "
              "and any two members differ by a periodic sequence; sampled r use denominator 1000";
    f.term = [](const Parameter& r, std::int64_t n) {
      if (!r.is_rational()) {
        throw PreconditionError("sin_drift_commensurable needs a rational-tagged parameter, got " + r.to_literal());
      }
      const auto nd = static_cast<double>(n);
      return std::sin(std::numbers::pi * r.value() * nd) - std::sin(nd);
    };
    f.make_param = [](double v) {
      return Parameter::rational(std::llround(v * static_cast<double>(kCommensurableDenominator)),
                                 kCommensurableDenominator);
    };
    out.push_back(std::move(f));
  }
  return out;
}

SequenceFamily find_sequence(const std::string& id) {
  for (auto& f : builtin_sequences()) {
    if (f.id == id) return f;
  }
  throw PreconditionError("unknown sequence family '" + id + "'");
}

SequenceFamily make_expression_sequence(const std::string& id, const Expression& expr, RealInterval omega,
                                        bool iteration) {
  SequenceFamily f;
  f.id = id;
  f.omega = omega;
  f.sample_omega = omega.is_finite() ? RealInterval::closed(omega.lo, omega.hi) : RealInterval::closed(0.5, 2.5);
  f.make_param = untagged_param;
  if (iteration) {
    f.notes = "user iteration u(n+1) = " + expr.text() + " with x = u(n), u(0) = a";
    f.init = [](const Parameter& a) { return a.value(); };
    f.step = [expr](const Parameter& a, double u) { return expr.evaluate(a.value(), u); };
  } else {
    f.notes = "user sequence u_a(n) = " + expr.text();
    f.term = [expr](const Parameter& a, std::int64_t n) { return expr.evaluate(a.value(), static_cast<double>(n)); };
  }
  return f;
}

TailStats tail_stats(const SequenceFamily& fam, const Parameter& x, const Parameter& y, std::int64_t tail_start,
                     std::int64_t tail_len) {
  if (tail_start < 0 || tail_len < 1) throw PreconditionError("tail window must have start >= 0 and length >= 1");
  check_param(fam, x);
  check_param(fam, y);
  return stats_against(fam, tail_values(fam, x, tail_start, tail_len), y, tail_start);
}

TailStats tail_stats(const SequenceFamily& fam, const Parameter& x, const Parameter& y, const ScanConfig& config) {
  return tail_stats(fam, x, y, config.tail_start, config.tail_len);
}

DuResult check_du(const SequenceFamily& fam, double lambda, const ScanConfig& config) {
  config.validate();
  if (!(lambda > 0.0)) throw PreconditionError("check_du needs lambda > 0");
  DuResult res;
  res.lambda = lambda;
  const RealInterval& so = fam.sample_omega;
  const double diam = so.width();
  const detail::R2 seq(config.seed, kDuStream);
  const double vw = 0.1 * diam;

  auto accept = [&](const TailStats& s) {
    return s.limsup_est >= lambda - config.tol_eq && s.liminf_est <= config.tol_liminf;
  };
  // <= 0 exactly when accept() would hold up to the tol_eq slack.
  auto deficit = [&](const TailStats& s) {
    const double a = std::log(std::max(s.liminf_est, 1e-300) / config.tol_liminf);
    const double b = std::log(lambda / std::max(s.limsup_est, 1e-300));
    return std::max(a, b);
  };

  bool all = true;
  for (int i = 0; i < config.du_samples; ++i) {
    const auto [u1, u2] = seq.at(i);
    const Parameter x = fam.make_param(so.lo + u1 * diam);
    DuWitness w;
    w.x = x;
    w.far = i % 2 == 1;
    if (w.far) {
      const double c = so.lo + detail::frac(u1 + 0.5) * diam;
      w.v = fit_open(c - 0.5 * vw, c + 0.5 * vw, so);
    } else {
      const double off = 0.02 * diam + 0.1 * u2 * diam;
      w.v = x.value() + off + vw <= so.hi ? fit_open(x.value() + off, x.value() + off + vw, so)
                                         : fit_open(x.value() - off - vw, x.value() - off, so);
    }
    const auto xs = tail_values(fam, x, config.tail_start, config.tail_len);
    // Candidates whose tagged parameter snaps outside V are skipped.
    auto eval_y = [&](double yv) -> std::optional<std::pair<Parameter, TailStats>> {
      const Parameter y = fam.make_param(yv);
      if (!w.v.contains(y.value())) return std::nullopt;
      ++w.candidates;
      return std::pair{y, stats_against(fam, xs, y, config.tail_start)};
    };

    double best_score = std::numeric_limits<double>::infinity();
    int best_j = 0;
    const double h = w.v.width() / config.du_grid;
    for (int j = 0; j < config.du_grid && !w.found; ++j) {
      const auto cand = eval_y(w.v.lo + (j + 0.5) * h);
      if (!cand) continue;
      const auto& [y, s] = *cand;
      const double sc = deficit(s);
      if (accept(s) || sc < best_score) {
        best_score = sc;
        best_j = j;
        w.y = y;
        w.stats = s;
        w.found = accept(s);
      }
    }
    if (!w.found) {
      const double lo = w.v.lo + std::max(best_j - 0.5, 0.0) * h;
      const double hi = w.v.lo + std::min(best_j + 1.5, static_cast<double>(config.du_grid)) * h;
      auto f = [&](double yv) {
        const auto cand = eval_y(yv);
        if (!cand) return std::numeric_limits<double>::infinity();
        const auto& [y, s] = *cand;
        if (!w.found && (accept(s) || deficit(s) < best_score)) {
          best_score = deficit(s);
          w.y = y;
          w.stats = s;
          w.found = accept(s);
        }
        return w.found ? -std::numeric_limits<double>::infinity() : deficit(s);
      };
      detail::golden_min(f, lo, hi, config.refine_iters, false);
    }
    for (std::int64_t len : {config.tail_len / 4, config.tail_len / 2, config.tail_len, 2 * config.tail_len}) {
      if (len < 1) continue;
      const TailStats s = tail_stats(fam, x, w.y, config.tail_start, len);
      w.study.push_back({len, s.limsup_est, s.liminf_est});
    }
    if (!w.found) {
      all = false;
      res.failures.push_back("no witness in V = " + w.v.to_string() + " for x = " + x.to_literal() +
                             "; best y = " + w.y.to_literal() + " has limsup " + format_double(w.stats.limsup_est) +
                             ", liminf " + format_double(w.stats.liminf_est));
    }
    res.witnesses.push_back(std::move(w));
  }
  res.holds = all;
  return res;
}

Cond41Result check_41(const SequenceFamily& fam, const ScanConfig& config, std::optional<double> eps_div) {
  config.validate();
  Cond41Result res;
  res.eps_div = eps_div.value_or(kDefaultEpsDiv);
  if (!(res.eps_div > 0.0)) throw PreconditionError("eps_div must be positive");
  const double eps_small = config.smallest_level();
  for (int c = 0; c < 4; ++c) res.checkpoints.push_back(config.tail_start + config.tail_len * c / 4);
  const RealInterval& so = fam.sample_omega;
  const double diam = so.width();
  const detail::R2 seq(config.seed, k41Stream);
  const auto len = static_cast<std::size_t>(config.tail_len);

  for (int i = 0; i < config.pair_samples; ++i) {
    const auto [u1, u2] = seq.at(i);
    const Parameter alpha = fam.make_param(so.lo + u1 * diam);
    const Parameter chi = fam.make_param(so.lo + u2 * diam);
    const auto xs = tail_values(fam, alpha, config.tail_start, config.tail_len);
    double r = 0.25 * diam;
    for (int k = 0; k < config.nbhd_levels; ++k, r *= config.nbhd_shrink) {
      Cond41Witness best;
      best.alpha = alpha;
      best.chi = chi;
      best.radius = r;
      bool have = false;
      const double c0 = detail::frac(0.7548776662466927 * (i + 1) + 0.5698402909980532 * (k + 1));
      for (int j = 0; j < config.beta_attempts; ++j) {
        const double bv = chi.value() + r * (2.0 * detail::frac(c0 + j * detail::kInvGolden) - 1.0) * 0.999;
        if (!fam.omega.contains(bv)) continue;
        const Parameter beta = fam.make_param(bv);
        if (beta == alpha) continue;
        ++best.attempts;
        // Suffix extrema of d over the tail answer "some m > n" for every
        // checkpoint at once.
        std::vector<double> d(len);
        OrbitCursor cur(fam, beta);
        cur.seek(config.tail_start);
        for (std::size_t t = 0; t < len; ++t) {
          if (t > 0) cur.advance();
          d[t] = std::abs(xs[t] - cur.value());
        }
        bool c1 = true;
        bool c2 = true;
        double mn_last = 0.0;
        double mx_last = 0.0;
        for (std::int64_t cp : res.checkpoints) {
          const auto from = static_cast<std::size_t>(cp - config.tail_start + 1);
          if (from >= len) {
            c1 = c2 = false;
            continue;
          }
          const auto [mn, mx] = std::minmax_element(d.begin() + static_cast<std::ptrdiff_t>(from), d.end());
          c1 = c1 && *mn < eps_small;
          c2 = c2 && *mx >= res.eps_div;
          mn_last = *mn;
          mx_last = *mx;
        }
        const bool better = !have || (c1 && c2) || (c1 + c2 > best.cond1 + best.cond2);
        if (better) {
          best.beta = beta;
          best.cond1 = c1;
          best.cond2 = c2;
          best.min_after_last = mn_last;
          best.max_after_last = mx_last;
          have = true;
        }
        if (c1 && c2) break;
      }
      if (!have) best.beta = alpha;
      const bool ok = best.cond1 && best.cond2;
      if (!ok) {
        std::string msg = "alpha = " + alpha.to_literal() + ", chi = " + chi.to_literal() + ", radius " +
                          format_double(r) + ":";
        if (!best.cond1) msg += " condition 1 fails (min after last checkpoint " + format_double(best.min_after_last) + ")";
        if (!best.cond2) msg += " condition 2 fails (max after last checkpoint " + format_double(best.max_after_last) + ")";
        res.failures.push_back(msg);
        res.witnesses.push_back(std::move(best));
        res.holds = false;
        return res;
      }
      res.witnesses.push_back(std::move(best));
    }
  }
  res.holds = true;
  return res;
}

}  // namespace chaoscope
