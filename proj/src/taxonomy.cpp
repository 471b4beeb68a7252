#include "chaoscope/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chaoscope/detail/sampling.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/numfmt.hpp"

namespace chaoscope {

namespace {

constexpr double kUniformTol = 1e-6;   // last sup-norm at or below this is uniform
constexpr double kPointwiseTol = 1e-6; // last consecutive difference on the core grid
constexpr double kLimitTol = 1e-6;     // core-grid match of a candidate limit
constexpr double kHorizon = 1e12;
constexpr int kGraded = 60;
constexpr std::uint64_t kBatteryStream = 5;

const double kSqrt2 = std::numbers::sqrt2;

double core_inset(double w) { return 0.01 * w; }

// Geometric ladder of kGraded distances from `far` down to `near` (both > 0),
// dropping `far` (toward a boundary) or `near` (out to the horizon).
std::vector<double> geometric(double far, double near, bool toward_horizon = false) {
  std::vector<double> out;
  const int first = toward_horizon ? 0 : 1;
  for (int k = first; k < first + kGraded; ++k) {
    out.push_back(far * std::pow(near / far, static_cast<double>(k) / kGraded));
  }
  return out;
}

Parameter with_class_of(const Parameter& tagged, double value) {
  return std::visit(
      [&](const auto& t) -> Parameter {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, RationalTag>) {
          return Parameter::exact_dyadic(value);
        } else if constexpr (std::is_same_v<T, AlgebraicTag>) {
          return Parameter::algebraic(t.degree, value);
        } else if constexpr (std::is_same_v<T, TranscendentalTag>) {
          return Parameter::transcendental(value);
        } else {
          return Parameter::untagged(value);
        }
      },
      tagged.tag());
}

// alpha + sign * h * 2^-n as an exact rational where alpha allows it.
Parameter rational_offset(const Parameter& alpha, double sign, int h_exp, int n) {
  if (const auto* r = std::get_if<RationalTag>(&alpha.tag())) {
    const int shift = h_exp + n;
    if (shift < 62) {
      const __int128 den = static_cast<__int128>(r->den) << shift;
      const __int128 num = (static_cast<__int128>(r->num) << shift) + static_cast<__int128>(sign) * r->den;
      constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
      if (den <= lim && num <= lim && num >= -lim) {
        return Parameter::rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
      }
    }
  }
  return Parameter::exact_dyadic(alpha.value() + sign * std::ldexp(1.0, -(h_exp + n)));
}

double eval_at(const FamilySpec& spec, const Parameter& a, double z) {
  try {
    return eval(spec, a, z);
  } catch (const SingularMoment&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<double> eval_row(const FamilySpec& spec, const Parameter& a, const std::vector<double>& moments) {
  std::vector<double> row(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) row[i] = eval_at(spec, a, moments[i]);
  return row;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b, const std::vector<char>& keep,
                std::size_t lo, std::size_t hi) {
  double m = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    if (keep[i]) m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

std::string_view to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::uniform: return "uniform";
    case ConvergenceVerdict::nonuniform: return "nonuniform";
    case ConvergenceVerdict::divergent: return "divergent";
  }
  return "?";
}

std::string_view to_string(LimitKind k) {
  switch (k) {
    case LimitKind::alpha_itself: return "alpha_itself";
    case LimitKind::other: return "other";
    case LimitKind::none: return "none";
  }
  return "?";
}

std::string_view to_string(PointLabel l) {
  switch (l) {
    case PointLabel::insensitive: return "insensitive";
    case PointLabel::smooth_sensitive: return "smooth_sensitive";
    case PointLabel::discontinuity: return "discontinuity";
    case PointLabel::total_disorder: return "total_disorder";
    case PointLabel::dense_disorder: return "dense_disorder";
    case PointLabel::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(FamilyLabel l) {
  switch (l) {
    case FamilyLabel::insensitive: return "insensitive";
    case FamilyLabel::smooth: return "smooth";
    case FamilyLabel::discontinuous_sensitive: return "discontinuous_sensitive";
    case FamilyLabel::totally_disordered: return "totally_disordered";
    case FamilyLabel::dense_disordered: return "dense_disordered";
    case FamilyLabel::mixed: return "mixed";
  }
  return "?";
}

ProbeGrid make_probe_grid(const RealInterval& domain, const ScanConfig& config, std::int64_t core_points) {
  if (core_points < 2) throw PreconditionError("probe grid needs at least 2 core points");
  const bool lo_fin = std::isfinite(domain.lo);
  const bool hi_fin = std::isfinite(domain.hi);
  double clo = lo_fin ? domain.lo : (hi_fin ? domain.hi - 20.0 : -10.0);
  double chi = hi_fin ? domain.hi : (lo_fin ? domain.lo + 20.0 : 10.0);
  const double w = chi - clo;
  const double margin = config.boundary_margin;
  ProbeGrid g;
  // Low end, ascending.
  if (lo_fin) {
    auto ds = geometric(core_inset(w), margin * std::max(1.0, std::abs(domain.lo)));
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) g.moments.push_back(domain.lo + *it);
    clo += core_inset(w);
  } else {
    for (double d : geometric(kHorizon, 1.0, true)) g.moments.push_back(clo - d);
  }
  g.core_begin = g.moments.size();
  if (hi_fin) chi -= core_inset(w);
  for (std::int64_t i = 0; i < core_points; ++i) {
    g.moments.push_back(clo + (chi - clo) * static_cast<double>(i) / static_cast<double>(core_points - 1));
  }
  g.core_end = g.moments.size();
  if (hi_fin) {
    auto ds = geometric(core_inset(w), margin * std::max(1.0, std::abs(domain.hi)));
    for (double d : ds) g.moments.push_back(domain.hi - d);
  } else {
    auto ds = geometric(kHorizon, 1.0, true);
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) g.moments.push_back(chi + *it);
  }
  // Grading may round onto the core ends or the boundary; keep only
  // distinct interior moments.
  std::vector<double> kept;
  std::size_t cb = 0;
  std::size_t ce = 0;
  for (std::size_t i = 0; i < g.moments.size(); ++i) {
    if (i == g.core_begin) cb = kept.size();
    if (i == g.core_end) ce = kept.size();
    const double z = g.moments[i];
    if (!domain.contains(z) || z == domain.lo || z == domain.hi) continue;
    if (!kept.empty() && z <= kept.back()) continue;
    kept.push_back(z);
  }
  if (g.core_end == g.moments.size()) ce = kept.size();
  g.moments = std::move(kept);
  g.core_begin = cb;
  g.core_end = ce;
  return g;
}

ConvergenceProfile convergence_profile(const FamilySpec& spec, const Parameter& alpha, std::span<const Parameter> seq,
                                       const ProbeGrid& grid, const ScanConfig& config) {
  (void)config;
  if (seq.size() < 2) throw PreconditionError("a convergence sequence needs at least 2 terms");
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& u : seq) {
    const double dist = std::abs(u.value() - alpha.value());
    if (u == alpha || !(dist < prev)) {
      throw PreconditionError("sequence must approach alpha with |u(n) - alpha| strictly decreasing and nonzero");
    }
    prev = dist;
  }
  const auto& z = grid.moments;
  ConvergenceProfile p;
  const auto base = eval_row(spec, alpha, z);
  std::vector<std::vector<double>> rows;
  rows.reserve(seq.size());
  for (const auto& u : seq) rows.push_back(eval_row(spec, u, z));
  std::vector<char> keep(z.size(), 1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    bool ok = std::isfinite(base[i]);
    for (const auto& r : rows) ok = ok && std::isfinite(r[i]);
    if (!ok) {
      keep[i] = 0;
      p.excluded_moments.push_back(z[i]);
    }
  }
  const auto& last = rows.back();
  const auto& before = rows[rows.size() - 2];
  const std::size_t cb = grid.core_begin;
  const std::size_t ce = grid.core_end;
  // Cauchy test over the last five terms, so one late repeat of a class
  // does not pass for convergence.
  const std::size_t tail = std::min<std::size_t>(5, rows.size());
  double cauchy = 0.0;
  for (std::size_t k = rows.size() - tail + 1; k < rows.size(); ++k) {
    cauchy = std::max(cauchy, sup_diff(rows[k], rows[k - 1], keep, cb, ce));
  }
  p.pointwise_ok = cauchy <= kPointwiseTol;

  // Candidate limit rows, compared on the core grid.
  std::vector<double> limit_row = base;
  if (!p.pointwise_ok) {
    p.limit = LimitKind::none;
    p.limit_description = "no pointwise limit on the core grid";
  } else if (sup_diff(last, base, keep, cb, ce) <= kLimitTol) {
    p.limit = LimitKind::alpha_itself;
    p.limit_description = "psi_alpha";
  } else {
    const Parameter beta = alpha.is_rational() && seq.back().is_rational()
                               ? alpha
                               : with_class_of(seq.back(), alpha.value());
    bool fitted = false;
    if (!(beta == alpha) && spec.omega.contains(beta.value()) && (!spec.requires_tags || beta.is_tagged())) {
      auto brow = eval_row(spec, beta, z);
      if (sup_diff(last, brow, keep, cb, ce) <= kLimitTol) {
        fitted = true;
        limit_row = std::move(brow);
        p.limit = LimitKind::other;
        p.limit_param = beta;
        p.limit_description = "psi_beta with beta = " + beta.to_literal();
      }
    }
    if (!fitted) {
      p.limit = LimitKind::none;
      p.limit_description = "pointwise limit is not psi at alpha's value in any tag class";
      limit_row = last;
    }
  }
  for (std::size_t n = 0; n < rows.size(); ++n) {
    p.sup_norms.emplace_back(static_cast<std::int64_t>(n + 1), sup_diff(rows[n], limit_row, keep, 0, z.size()));
  }
  if (!p.pointwise_ok) {
    p.verdict = ConvergenceVerdict::divergent;
  } else {
    // An unidentified limit is the last term itself, so judge the last
    // consecutive step instead.
    const double s = p.limit == LimitKind::none ? sup_diff(last, before, keep, 0, z.size()) : p.sup_norms.back().second;
    p.verdict = s <= kUniformTol ? ConvergenceVerdict::uniform : ConvergenceVerdict::nonuniform;
  }
  return p;
}

std::vector<BatterySequence> build_battery(const FamilySpec& spec, const Parameter& alpha, const ScanConfig& config) {
  const int terms = config.battery_terms;
  const double a = alpha.value();
  // Offset scale 2^-h_exp: the largest power of two keeping alpha +- h
  // inside omega (open interior).
  auto scale_for = [&](double sign) {
    for (int e = 3; e < 40; ++e) {
      const double v = a + sign * std::ldexp(1.0, -e);
      if (spec.omega.contains(v) && v != spec.omega.lo && v != spec.omega.hi) return e;
    }
    return -1;
  };
  const bool tags_only = spec.requires_tags;
  std::vector<BatterySequence> out;
  auto add = [&](std::string name, std::vector<Parameter> ts) {
    BatterySequence b;
    b.name = std::move(name);
    for (const auto& t : ts) {
      const auto c = t.arithmetic_class();
      if (std::find(b.classes.begin(), b.classes.end(), c) == b.classes.end()) b.classes.push_back(c);
    }
    b.terms = std::move(ts);
    out.push_back(std::move(b));
  };

  for (double sign : {1.0, -1.0}) {
    const int e = scale_for(sign);
    if (e < 0) continue;
    const double h = std::ldexp(1.0, -e);
    const std::string dir = sign > 0 ? "above" : "below";
    std::vector<Parameter> rat, quad, trans, untag;
    for (int n = 1; n <= terms; ++n) {
      const double off = sign * h * std::ldexp(1.0, -n);
      rat.push_back(rational_offset(alpha, sign, e, n));
      quad.push_back(Parameter::algebraic(2, a + off * kSqrt2 / 2.0));
      trans.push_back(Parameter::transcendental(a + off * std::numbers::pi / 4.0));
      untag.push_back(Parameter::untagged(a + off * detail::kInvGolden));
    }
    add("rational_" + dir, std::move(rat));
    add("quadratic_" + dir, std::move(quad));
    add("transcendental_" + dir, std::move(trans));
    if (!tags_only) add("untagged_" + dir, std::move(untag));
  }

  const int e = std::max(scale_for(1.0), scale_for(-1.0));
  if (e >= 0) {
    const double sign = scale_for(1.0) == e ? 1.0 : -1.0;
    const double h = std::ldexp(1.0, -e);
    std::vector<Parameter> ladder, alternating, random;
    for (int n = 1; n <= terms; ++n) {
      const double off = sign * h * std::ldexp(1.0, -n);
      const int d = 2 + n % 4;
      ladder.push_back(Parameter::algebraic(d, a + off * std::pow(2.0, 1.0 / d) / 2.0));
      if (n % 2 == 0) {
        alternating.push_back(rational_offset(alpha, sign, e, n));
      } else {
        alternating.push_back(Parameter::transcendental(a + off * std::numbers::pi / 4.0));
      }
      const int classes = tags_only ? 3 : 4;
      const int pick = static_cast<int>(detail::unit_hash(config.seed ^ kBatteryStream, static_cast<std::uint64_t>(n)) * classes);
      switch (pick) {
        case 0: random.push_back(rational_offset(alpha, sign, e, n)); break;
        case 1: random.push_back(Parameter::algebraic(2, a + off * kSqrt2 / 2.0)); break;
        case 2: random.push_back(Parameter::transcendental(a + off * std::numbers::pi / 4.0)); break;
        default: random.push_back(Parameter::untagged(a + off * detail::kInvGolden)); break;
      }
    }
    add("degree_ladder", std::move(ladder));
    add("alternating_rational_transcendental", std::move(alternating));
    add("random_class", std::move(random));
    for (int k = 0; k < 4; ++k) {
      std::vector<Parameter> comp;
      for (int n = 1; n <= terms; ++n) {
        const double v = a + sign * h * std::ldexp(1.0, -n) * (0.55 + 0.1 * k);
        comp.push_back((n + k) % 2 == 0 ? Parameter::algebraic(2 + (n + k) % 5, v) : Parameter::transcendental(v));
      }
      add("irrational_companion_" + std::to_string(k), std::move(comp));
    }
  }
  return out;
}

PointResult classify_point(const FamilySpec& spec, const Parameter& alpha, const ScanConfig& config) {
  config.validate();
  if (!spec.omega.contains(alpha.value()) || alpha.value() == spec.omega.lo || alpha.value() == spec.omega.hi) {
    throw PreconditionError("alpha " + alpha.to_literal() + " must lie in the interior of omega " +
                            spec.omega.to_string());
  }
  if (spec.requires_tags && !alpha.is_tagged()) {
    throw PreconditionError(spec.id + " needs a tagged alpha, got " + alpha.to_literal());
  }
  PointResult res;
  res.alpha = alpha;
  const ProbeGrid grid = make_probe_grid(spec.theta, config);
  const auto battery = build_battery(spec, alpha, config);
  if (battery.empty()) throw PreconditionError("no battery sequence fits inside omega around " + alpha.to_literal());
  std::vector<const BatterySequence*> seqs;
  for (const auto& b : battery) {
    res.profiles.emplace_back(b.name, convergence_profile(spec, alpha, b.terms, grid, config));
    seqs.push_back(&b);
  }
  const auto n = res.profiles.size();
  std::size_t uniform_alpha = 0, nonuniform_alpha = 0, divergent = 0;
  for (const auto& [name, p] : res.profiles) {
    if (p.verdict == ConvergenceVerdict::divergent) ++divergent;
    if (p.limit == LimitKind::alpha_itself && p.verdict == ConvergenceVerdict::uniform) ++uniform_alpha;
    if (p.limit == LimitKind::alpha_itself && p.verdict == ConvergenceVerdict::nonuniform) ++nonuniform_alpha;
  }
  res.divergent_fraction = static_cast<double>(divergent) / static_cast<double>(n);
  res.notes.push_back("labels are relative to a battery of " + std::to_string(n) + " sequences");
  if (!res.profiles.front().second.excluded_moments.empty()) {
    res.notes.push_back(std::to_string(res.profiles.front().second.excluded_moments.size()) +
                        " singular probe moments excluded");
  }
  if (uniform_alpha == n) {
    res.label = PointLabel::insensitive;
    return res;
  }
  if (nonuniform_alpha == n) {
    res.label = PointLabel::smooth_sensitive;
    return res;
  }
  if (divergent == n) {
    res.label = PointLabel::total_disorder;
    return res;
  }
  // "Almost every sequence": every sequence free of one exceptional class
  // (or, with no exception, every sequence) satisfies the rule, and those
  // sequences are at least half the battery.
  const std::vector<std::optional<ArithmeticClass>> exceptions = {
      std::nullopt, ArithmeticClass::rational, ArithmeticClass::algebraic_irrational, ArithmeticClass::transcendental,
      ArithmeticClass::untagged};
  auto almost_all = [&](auto&& rule) -> std::optional<std::optional<ArithmeticClass>> {
    for (const auto& ex : exceptions) {
      std::size_t considered = 0;
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& cls = seqs[i]->classes;
        if (ex && std::find(cls.begin(), cls.end(), *ex) != cls.end()) continue;
        ++considered;
        all = all && rule(res.profiles[i].second);
      }
      if (all && 2 * considered >= n) return ex;
    }
    return std::nullopt;
  };
  // Discontinuity: the limit is a member other than psi_alpha.
  if (auto ex = almost_all([](const ConvergenceProfile& p) { return p.pointwise_ok && p.limit == LimitKind::other; })) {
    res.label = PointLabel::discontinuity;
    res.exceptional_class = *ex;
    return res;
  }
  // Smooth sensitivity up to one exceptional class: the exempt sequences
  // are the ones that leave for another member.
  if (auto ex = almost_all([](const ConvergenceProfile& p) {
        return p.limit == LimitKind::alpha_itself && p.verdict == ConvergenceVerdict::nonuniform;
      })) {
    res.label = PointLabel::smooth_sensitive;
    res.exceptional_class = *ex;
    if (*ex) {
      res.notes.push_back("smooth sensitivity holds for every sequence avoiding the " +
                          std::string(to_string(**ex)) + " class");
    }
    return res;
  }
  if (res.divergent_fraction >= config.disorder_fraction) {
    res.label = PointLabel::dense_disorder;
    res.notes.push_back("density rendered as a divergent fraction of the battery >= " +
                        format_double(config.disorder_fraction));
    return res;
  }
  res.label = PointLabel::inconclusive;
  return res;
}

Parameter taxonomy_sample_param(double value, int index) {
  if (index % 2 == 0) return Parameter::rational(std::llround(value * 1000.0), 1000);
  return Parameter::transcendental(value);
}

FamilyResult classify_family(const FamilySpec& spec, const ScanConfig& config) {
  config.validate();
  FamilyResult res;
  const RealInterval& so = spec.sample_omega;
  const int m = config.omega_samples;
  for (int i = 0; i < m; ++i) {
    const double v = so.lo + so.width() * (i + 0.5) / m;
    res.points.push_back(classify_point(spec, taxonomy_sample_param(v, i), config));
  }
  auto count = [&](PointLabel l) {
    return static_cast<int>(std::count_if(res.points.begin(), res.points.end(),
                                           [l](const PointResult& p) { return p.label == l; }));
  };
  const int smooth = count(PointLabel::smooth_sensitive);
  const int disc = count(PointLabel::discontinuity);
  if (count(PointLabel::insensitive) == m) {
    res.label = FamilyLabel::insensitive;
  } else if (smooth == m) {
    res.label = FamilyLabel::smooth;
  } else if (smooth > 0 && disc > 0 && smooth + disc == m) {
    res.label = FamilyLabel::discontinuous_sensitive;
  } else if (count(PointLabel::total_disorder) == m) {
    res.label = FamilyLabel::totally_disordered;
  } else if (count(PointLabel::dense_disorder) >= config.disorder_fraction * m) {
    res.label = FamilyLabel::dense_disordered;
  } else {
    res.label = FamilyLabel::mixed;
  }
  return res;
}

}  // namespace chaoscope
