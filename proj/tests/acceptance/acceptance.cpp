// End-to-end checks, one line per criterion:  [PASS|FAIL|SOFT] <n> <summary> (<seconds>)
// Exit status is nonzero when any hard criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chaoscope/classifier.hpp"
#include "chaoscope/cli.hpp"
#include "chaoscope/detail/sampling.hpp"
#include "chaoscope/discrete.hpp"
#include "chaoscope/expression.hpp"
#include "chaoscope/report.hpp"
#include "chaoscope/taxonomy.hpp"
#include "chaoscope/window_scanner.hpp"

using namespace chaoscope;

namespace {

enum class Outcome { pass, fail, soft };

struct Line {
  int id;
  Outcome outcome;
  std::string summary;
  double seconds;
};

std::vector<Line> lines;
std::vector<std::pair<FamilySpec, std::vector<PairEvidence>>> evidence_by_family;

void run(int id, double budget, const std::function<std::pair<Outcome, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::pair<Outcome, std::string> r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {Outcome::fail, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0 && s > budget && r.first == Outcome::pass) {
    r = {Outcome::fail, r.second + "; over the " + std::to_string(static_cast<int>(budget)) + " s budget"};
  }
  const char* tag = r.first == Outcome::pass ? "PASS" : r.first == Outcome::fail ? "FAIL" : "SOFT";
  std::printf("[%s] %d %s (%.1f s)\n", tag, id, r.second.c_str(), s);
  std::fflush(stdout);
  lines.push_back({id, r.first, r.second, s});
}

std::string fmt(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

int chain_depth(const DependenceResult& r) {
  int best = 0;
  for (const auto& e : r.evidence) best = std::max(best, e.chain.deepest_level);
  return best;
}

std::pair<Outcome, std::string> kind1(const std::string& id, const std::string& range) {
  const ScanConfig cfg = default_config();
  const FamilySpec spec = find_family(id);
  const Verdict v = classify_kind(spec, cfg, RealInterval::parse(range));
  evidence_by_family.emplace_back(spec, v.evidence);
  int min_depth = ScanConfig{}.ladder_depth + 1;
  for (const auto& e : v.cross.evidence) min_depth = std::min(min_depth, e.chain.deepest_level);
  const bool ok = v.label == VerdictLabel::kind1 && v.cross.holds && min_depth >= cfg.ladder_depth &&
                  !v.disjoint.holds && v.mu_estimate > cfg.mu_min;
  return {ok ? Outcome::pass : Outcome::fail,
          id + " on " + range + ": " + std::string(to_string(v.label)) + ", cross depth " +
              std::to_string(min_depth) + " over " + std::to_string(v.cross.evidence.size()) +
              " chains, disjoint " + (v.disjoint.holds ? "holds" : "fails") + ", mu " + fmt(v.mu_estimate)};
}

std::pair<Outcome, std::string> negative_controls() {
  const ScanConfig cfg = default_config();
  const FamilySpec lin = find_family("linear_ax");
  const Verdict vl = classify_kind(lin, cfg, RealInterval::closed(-10.0, 10.0));
  evidence_by_family.emplace_back(lin, vl.evidence);
  // a x - b x vanishes only at x = 0, so no chain can take a second window.
  bool single_crossing = true;
  for (const auto& e : vl.evidence) {
    const auto xs = scan_crossings(lin, e.alpha, e.beta, RealInterval::closed(-10.0, 10.0), cfg);
    single_crossing = single_crossing && xs.size() == 1 && std::abs(xs[0].z) < 1e-12;
    single_crossing = single_crossing && e.chain.deepest_level <= 1;
  }
  const FamilySpec flat = make_expression_family("constant", Expression::parse("0*a + 3"),
                                                 RealInterval::closed(0.0, 1.0), RealInterval::closed(0.0, 1.0));
  const Verdict vc = classify_kind(flat, cfg, RealInterval::closed(0.0, 1.0));
  const bool ok = vl.label == VerdictLabel::sensitive_only && single_crossing &&
                  vc.label == VerdictLabel::insensitive;
  return {ok ? Outcome::pass : Outcome::fail,
          "linear_ax: " + std::string(to_string(vl.label)) + (single_crossing ? " (single crossing at 0)" : " (extra crossings)") +
              ", constant: " + std::string(to_string(vc.label))};
}

std::pair<Outcome, std::string> du() {
  const ScanConfig cfg = default_config();
  const DuResult logistic = check_du(find_sequence("logistic_357"), 0.1, cfg);
  const DuResult drift = check_du(find_sequence("sin_drift_commensurable"), 0.1, cfg);
  double best = 0.0;
  for (const auto& w : logistic.witnesses) {
    if (w.stats.liminf_est <= cfg.tol_liminf) best = std::max(best, w.stats.limsup_est);
  }
  const bool ok = logistic.holds && !drift.holds && logistic.witnesses.size() >= 8;
  return {ok ? Outcome::pass : Outcome::fail,
          "logistic_357 du(0.1) " + std::string(logistic.holds ? "holds" : "fails") + " over " +
              std::to_string(logistic.witnesses.size()) + " samples (best limsup with liminf ~ 0: " + fmt(best) +
              "), sin_drift_commensurable " + (drift.holds ? "holds" : "fails")};
}

std::pair<Outcome, std::string> oracle_equivalence() {
  const ScanConfig cfg = default_config();
  int windows = 0, gaps = 0, crossings = 0;
  std::vector<std::string> bad;
  for (const auto& [spec, ev] : evidence_by_family) {
    const ReplayResult r = replay_evidence(spec, ev, cfg, 10);
    windows += r.windows_checked;
    gaps += r.gaps_checked;
    for (const auto& f : r.failures) bad.push_back(spec.id + ": " + f);
    // Crossings of every recorded pair: a sign change or a 2x tol_zero residual
    // on a grid ten times finer than the scan spacing.
    for (const auto& e : ev) {
      const RealInterval range = e.chain.range;
      const double h = range.width() / static_cast<double>(e.chain.grid_points - 1) / 10.0;
      for (const auto& c : scan_crossings(spec, e.alpha, e.beta, range, cfg)) {
        ++crossings;
        const double at = std::abs(eval_signed_diff(spec, e.alpha, e.beta, c.z));
        const double l = eval_signed_diff(spec, e.alpha, e.beta, std::max(range.lo, c.z - h));
        const double u = eval_signed_diff(spec, e.alpha, e.beta, std::min(range.hi, c.z + h));
        if (!(at <= 2 * cfg.tol_zero || l * u <= 0.0)) bad.push_back(spec.id + ": crossing " + fmt(c.z));
      }
    }
  }
  const FamilySpec sin_ax = find_family("sin_ax");
  const auto xs = scan_crossings(sin_ax, Parameter::rational(1, 1), Parameter::rational(2, 1),
                                 RealInterval::closed(0.1, 2 * std::numbers::pi - 0.1), cfg);
  const double want[] = {std::numbers::pi / 3, std::numbers::pi, 5 * std::numbers::pi / 3};
  double err = xs.size() == 3 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < xs.size() && i < 3; ++i) err = std::max(err, std::abs(xs[i].z - want[i]));
  if (xs.size() != 3 || err > 1e-9) bad.push_back("sin_ax crossings off by " + fmt(err));
  std::string s = std::to_string(windows) + " windows, " + std::to_string(gaps) + " gaps, " +
                  std::to_string(crossings) + " crossings re-validated; sin_ax {pi/3, pi, 5pi/3} max error " + fmt(err);
  if (!bad.empty()) s += "; first failure: " + bad.front() + " (" + std::to_string(bad.size()) + " total)";
  return {bad.empty() && windows > 0 ? Outcome::pass : Outcome::fail, s};
}

std::pair<Outcome, std::string> prime_sum() {
  double worst_ratio = 0.0;
  detail::R2 gen(12345, 0);
  for (int i = 0; i < 100; ++i) {
    const auto [u1, u2] = gen.at(i);
    const Parameter a = Parameter::untagged(-5.0 + 10.0 * u1);
    const double x = -100.0 + 200.0 * u2;
    for (std::int64_t p : {1000, 10000, 100000}) {
      const double d = std::abs(prime_sum_truncation(a, x, p).value - prime_sum_truncation(a, x, 2 * p).value);
      worst_ratio = std::max(worst_ratio, d * static_cast<double>(p));
    }
  }
  return {worst_ratio <= 1.0 ? Outcome::pass : Outcome::fail,
          "max P |value(P) - value(2P)| = " + fmt(worst_ratio) + " over 100 samples x 3 cutoffs"};
}

std::pair<Outcome, std::string> taxonomy() {
  const ScanConfig cfg = default_config();
  std::string s;
  bool ok = true;
  for (const char* id : {"linear_ax", "sin_2pia", "log_sine"}) {
    const FamilySpec spec = find_family(id);
    const FamilyResult r = classify_family(spec, cfg);
    int smooth = 0;
    for (const auto& p : r.points) smooth += p.label == PointLabel::smooth_sensitive;
    ok = ok && smooth == static_cast<int>(r.points.size()) && r.points.size() == 10;
    s += std::string(id) + " " + std::to_string(smooth) + "/" + std::to_string(r.points.size()) + ", ";
  }
  const FamilySpec mixed = find_family("mixed_rat_irr");
  const PointResult pr = classify_point(mixed, Parameter::rational(1, 2), cfg);
  const ConvergenceProfile* rat = nullptr;
  const ConvergenceProfile* irr = nullptr;
  for (const auto& [name, p] : pr.profiles) {
    if (name == "rational_above") rat = &p;
    if (name == "transcendental_above") irr = &p;
  }
  const bool rat_ok = rat && rat->limit == LimitKind::alpha_itself && rat->verdict == ConvergenceVerdict::uniform;
  const bool irr_ok = irr && irr->limit == LimitKind::other && irr->verdict == ConvergenceVerdict::nonuniform;
  ok = ok && rat_ok && irr_ok;
  s += "mixed_rat_irr at 1/2: rational " +
       (rat ? std::string(to_string(rat->limit)) + "/" + std::string(to_string(rat->verdict)) : "missing") +
       ", transcendental " +
       (irr ? std::string(to_string(irr->limit)) + "/" + std::string(to_string(irr->verdict)) : "missing");
  return {ok ? Outcome::pass : Outcome::fail, s};
}

Json strip_timestamp(Json j) {
  if (j.contains("command")) j["command"].erase("timestamp");
  return j;
}

std::pair<Outcome, std::string> replay() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("chaoscope_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands = {
      {"classify", "sin_ax", "--range", "0:500"},
      {"classify", "linear_ax", "--range", "-10:10"},
      {"windows", "sin_ax", "--alpha", "1", "--beta", "2", "--range", "0.1:6.18", "--eps", "0.5"},
      {"windows", "log_sine", "--alpha", "0.3", "--beta", "0.7", "--range", "0.01:1"},
      {"discrete", "logistic_357", "tail", "--x", "0.3", "--y", "0.300000001"},
      {"discrete", "sin_drift_commensurable", "cond41"},
      {"taxonomy", "mixed_rat_irr", "--alpha", "1/2"},
      {"list", "--kind", "all"},
  };
  int same = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string a = (dir / ("a" + std::to_string(i) + ".json")).string();
    const std::string b = (dir / ("b" + std::to_string(i) + ".json")).string();
    std::vector<std::string> argv{"chaoscope"};
    argv.insert(argv.end(), commands[i].begin(), commands[i].end());
    std::ostringstream o1, e1, o2, e2;
    auto first = argv;
    first.insert(first.end(), {"--out", a});
    run_cli(first, o1, e1);
    auto second = argv;
    // `list` has no embedded config to replay; it is simply rerun.
    if (commands[i][0] != "list") second.insert(second.end(), {"--config", a});
    second.insert(second.end(), {"--out", b});
    run_cli(second, o2, e2);
    std::ifstream fa(a), fb(b);
    if (!fa || !fb) {
      if (first_bad.empty()) first_bad = commands[i][0] + " wrote no report: " + e1.str();
      continue;
    }
    const Json ja = strip_timestamp(Json::parse(fa));
    const Json jb = strip_timestamp(Json::parse(fb));
    if (ja.dump() == jb.dump()) {
      ++same;
    } else if (first_bad.empty()) {
      first_bad = commands[i][0] + " " + commands[i][1];
    }
  }
  fs::remove_all(dir);
  std::string s = std::to_string(same) + "/" + std::to_string(commands.size()) + " reports identical on replay";
  if (!first_bad.empty()) s += "; differs: " + first_bad;
  return {same == static_cast<int>(commands.size()) ? Outcome::pass : Outcome::fail, s};
}

std::pair<Outcome, std::string> kind3() {
  const ScanConfig cfg = default_config();
  const Verdict v = classify_kind(find_family("g_iter_2"), cfg, RealInterval::closed(-2.0, 2.0));
  const std::string s = "g_iter_2 on -2:2: " + std::string(to_string(v.label)) + ", cross depth " +
                        std::to_string(chain_depth(v.cross)) + ", disjoint depth " +
                        std::to_string(chain_depth(v.disjoint)) + ", mu " + fmt(v.mu_estimate);
  if (v.label == VerdictLabel::kind3) return {Outcome::pass, s};
  if (v.label == VerdictLabel::inconclusive) return {Outcome::soft, s + " (soft fail)"};
  return {Outcome::fail, s};
}

}  // namespace

int main() {
  run(1, 60, [] { return kind1("sin_ax", "0:500"); });
  run(2, 60, [] { return kind1("log_sine", "0.01:1"); });
  run(3, 10, negative_controls);
  run(4, 120, du);
  run(5, 0, oracle_equivalence);
  run(6, 0, prime_sum);
  run(7, 60, taxonomy);
  run(8, 0, replay);
  run(9, 0, kind3);
  int hard = 0;
  for (const auto& l : lines) hard += l.outcome == Outcome::fail;
  std::printf("%d of %zu criteria failed hard\n", hard, lines.size());
  return hard == 0 ? 0 : 1;
}
