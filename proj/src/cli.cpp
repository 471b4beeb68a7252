#include "chaoscope/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <unistd.h>

#include "chaoscope/classifier.hpp"
#include "chaoscope/discrete.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/expression.hpp"
#include "chaoscope/numfmt.hpp"
#include "chaoscope/report.hpp"
#include "chaoscope/taxonomy.hpp"
#include "chaoscope/window_scanner.hpp"

namespace chaoscope {

namespace {

struct Common {
  std::string config_path;
  bool json = false;
  std::string out_path;
  std::optional<std::uint64_t> seed;
};

struct UserFamily {
  std::string expr;
  std::string omega = "-inf:inf";
  std::string theta = "-inf:inf";
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "ScanConfig JSON, or a report whose config is replayed");
  sub->add_flag("--json", c.json, "print the full JSON report");
  sub->add_option("--out", c.out_path, "write the JSON report to this file");
  sub->add_option("--seed", c.seed, "override config.seed");
}

void add_user_family(CLI::App* sub, UserFamily& u) {
  sub->add_option("--expr", u.expr, "user family expression in a and x (n for sequences)");
  sub->add_option("--omega", u.omega, "parameter domain lo:hi of a user family");
  sub->add_option("--theta", u.theta, "moment domain lo:hi of a user family");
}

ScanConfig resolve_config(const Common& c) {
  ScanConfig cfg = c.config_path.empty() ? default_config() : load_config_file(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw PreconditionError("cannot write " + tmp);
    f << data;
    f.flush();
    if (!f) throw PreconditionError("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Json report_skeleton(const Json& family, const ScanConfig& cfg, const std::string& name, Json arguments) {
  Json r;
  r["tool_version"] = CHAOSCOPE_VERSION;
  r["family"] = family;
  r["config"] = to_json(cfg);
  r["command"] = Json{{"name", name}, {"arguments", std::move(arguments)}, {"timestamp", timestamp()}};
  r["result"] = nullptr;
  r["evidence"] = Json::array();
  r["warnings"] = Json::array();
  return r;
}

void emit(const Common& c, const Json& report, const std::string& summary, std::ostream& out) {
  if (!c.out_path.empty()) write_atomic(c.out_path, dump(report));
  if (c.json) {
    out << dump(report);
  } else {
    out << summary;
  }
}

struct ResolvedFamily {
  FamilySpec spec;
  Json description;
};

ResolvedFamily resolve_family(const std::string& id, const UserFamily& u, const ScanConfig& cfg) {
  if (!u.expr.empty()) {
    const std::string name = id.empty() ? "user" : id;
    auto spec = make_expression_family(name, Expression::parse(u.expr), RealInterval::parse(u.omega),
                                       RealInterval::parse(u.theta));
    Json d = describe(spec);
    d["expression"] = u.expr;
    return {std::move(spec), std::move(d)};
  }
  if (id.empty()) throw PreconditionError("a family id or --expr is required");
  auto spec = find_family(id, cfg.seed);
  Json d = describe(spec);
  return {std::move(spec), std::move(d)};
}

RealInterval resolve_range(const FamilySpec& spec, const std::string& range, Json& warnings) {
  if (!range.empty()) return RealInterval::parse(range);
  if (spec.default_range) {
    warnings.push_back("no --range given; using the family default " + spec.default_range->to_string());
    return *spec.default_range;
  }
  throw PreconditionError(spec.id + " has an unbounded moment domain; pass --range lo:hi");
}

int cmd_list(const std::string& kind, const Common& c, std::ostream& out) {
  if (kind != "all" && kind != "continuous" && kind != "discrete") {
    throw PreconditionError("--kind must be all, continuous or discrete");
  }
  Json arr = Json::array();
  std::string text;
  if (kind != "discrete") {
    for (const auto& f : builtin_catalog()) {
      arr.push_back(describe(f));
      text += f.id + "  omega " + f.omega.to_string() + "  theta " + f.theta.to_string() + "\n    " + f.notes + "\n";
    }
  }
  if (kind != "continuous") {
    for (const auto& f : builtin_sequences()) {
      arr.push_back(describe(f));
      text += f.id + "  (sequence)  omega " + f.omega.to_string() + "\n    " + f.notes + "\n";
    }
  }
  if (!c.out_path.empty()) write_atomic(c.out_path, dump(arr));
  out << (c.json ? dump(arr) : text);
  return kExitOk;
}

int cmd_classify(const std::string& id, const UserFamily& u, const std::string& range_text,
                 const std::string& strength_text, bool commensurable, const Common& c, std::ostream& out) {
  const ScanConfig cfg = resolve_config(c);
  auto fam = resolve_family(id, u, cfg);
  Json warnings = Json::array();
  const RealInterval range = resolve_range(fam.spec, range_text, warnings);
  const Strength strength = parse_strength(strength_text);
  const Verdict v = classify_kind(fam.spec, cfg, range, strength, DependenceOptions{commensurable});
  Json args{{"family", fam.spec.id}, {"range", to_json(range)}, {"strength", to_string(strength)},
            {"pairs_commensurable", commensurable}};
  Json report = report_skeleton(fam.description, cfg, "classify", args);
  report["result"] = verdict_result(v);
  for (const auto& e : v.evidence) report["evidence"].push_back(to_json(e));
  report["warnings"] = warnings;
  if (v.label == VerdictLabel::inconclusive) report["warnings"].push_back("verdict is inconclusive at this resolution");
  std::string summary = fam.spec.id + ": " + std::string(to_string(v.label)) + "\n  cross " +
                        (v.cross.holds ? "holds" : "fails") + ", disjoint " + (v.disjoint.holds ? "holds" : "fails") +
                        ", sensitive " + (v.sensitivity.holds ? "yes" : "no") + "\n  mu_estimate " +
                        format_double(v.mu_estimate) + " (" + std::string(to_string(strength)) + ", range " +
                        range.to_string() + ")\n";
  for (const auto& f : v.cross.failures) summary += "  cross: " + f + "\n";
  for (const auto& f : v.disjoint.failures) summary += "  disjoint: " + f + "\n";
  emit(c, report, summary, out);
  return v.label == VerdictLabel::inconclusive ? kExitInconclusive : kExitOk;
}

int cmd_windows(const std::string& id, const UserFamily& u, const std::string& alpha_text,
                const std::string& beta_text, const std::string& kind_text, std::optional<double> eps,
                const std::string& range_text, const std::string& plot_path, const Common& c, std::ostream& out) {
  const ScanConfig cfg = resolve_config(c);
  auto fam = resolve_family(id, u, cfg);
  Json warnings = Json::array();
  const RealInterval range = resolve_range(fam.spec, range_text, warnings);
  const Parameter alpha = Parameter::parse(alpha_text);
  const Parameter beta = Parameter::parse(beta_text);
  const WindowKind kind = parse_window_kind(kind_text);
  PairScan scan(fam.spec, alpha, beta, range, cfg);
  Json args{{"family", fam.spec.id}, {"alpha", to_json(alpha)}, {"beta", to_json(beta)},
            {"kind", to_string(kind)}, {"eps", eps ? Json(*eps) : Json(nullptr)}, {"range", to_json(range)}};
  Json report = report_skeleton(fam.description, cfg, "windows", args);
  Json result;
  result["crossings"] = Json::array();
  for (const auto& x : scan.crossings()) result["crossings"].push_back(to_json(x));
  std::string summary = fam.spec.id + " alpha " + alpha.to_literal() + " beta " + beta.to_literal() + ": " +
                        std::to_string(scan.crossings().size()) + " crossings\n";
  if (eps) {
    const auto ws = scan.windows(kind, *eps);
    result["windows"] = Json::array();
    for (const auto& w : ws) result["windows"].push_back(to_json(w));
    summary += "  " + std::to_string(ws.size()) + " " + std::string(to_string(kind)) + " windows at eps " +
               format_double(*eps) + "\n";
    for (const auto& w : ws) summary += "    [" + format_double(w.x1) + ", " + format_double(w.y1) + "]\n";
  } else {
    const WindowChain chain = build_chain(scan, kind);
    result["chain"] = to_json(chain);
    summary += "  " + std::string(to_string(kind)) + " chain: " + (chain.succeeded() ? "complete" : "failed") +
               ", depth " + std::to_string(chain.deepest_level) +
               (chain.succeeded() ? "" : ", " + std::string(to_string(chain.reason)) + " at eps " +
                                            format_double(chain.failed_eps)) +
               "\n";
  }
  report["result"] = result;
  report["warnings"] = warnings;
  if (!plot_path.empty()) {
    std::string csv = "z,psi_alpha,psi_beta,abs_diff\n";
    const auto zs = scan.grid();
    for (double z : zs) {
      const double pa = eval(fam.spec, alpha, z);
      const double pb = eval(fam.spec, beta, z);
      csv += format_double(z) + "," + format_double(pa) + "," + format_double(pb) + "," +
             format_double(std::abs(pa - pb)) + "\n";
    }
    write_atomic(plot_path, csv);
  }
  emit(c, report, summary, out);
  return kExitOk;
}

int cmd_discrete(const std::string& id, const std::string& mode, const UserFamily& u, bool iteration,
                 double lambda, const std::string& x_text, const std::string& y_text, std::optional<double> eps_div,
                 const Common& c, std::ostream& out) {
  const ScanConfig cfg = resolve_config(c);
  SequenceFamily fam;
  Json desc;
  if (!u.expr.empty()) {
    fam = make_expression_sequence(id.empty() ? "user" : id, Expression::parse(u.expr), RealInterval::parse(u.omega),
                                   iteration);
    desc = describe(fam);
    desc["expression"] = u.expr;
  } else {
    fam = find_sequence(id);
    desc = describe(fam);
  }
  Json args{{"family", fam.id}, {"mode", mode}};
  Json result;
  std::string summary;
  bool definitive = true;
  Json evidence = Json::array();
  if (mode == "tail") {
    if (x_text.empty() || y_text.empty()) throw PreconditionError("tail needs --x and --y");
    const Parameter x = Parameter::parse(x_text);
    const Parameter y = Parameter::parse(y_text);
    args["x"] = to_json(x);
    args["y"] = to_json(y);
    result = to_json(tail_stats(fam, x, y, cfg));
    Json study = Json::array();
    for (std::int64_t len : {cfg.tail_len / 4, cfg.tail_len / 2, cfg.tail_len, 2 * cfg.tail_len}) {
      if (len < 1) continue;
      const auto s = tail_stats(fam, x, y, cfg.tail_start, len);
      study.push_back(Json{{"tail_len", len}, {"limsup_est", s.limsup_est}, {"liminf_est", s.liminf_est}});
    }
    result["tail_doubling"] = study;
    summary = fam.id + " tail: limsup " + format_double(result["limsup_est"].get<double>()) + ", liminf " +
              format_double(result["liminf_est"].get<double>()) + "\n";
  } else if (mode == "du") {
    args["lambda"] = lambda;
    const DuResult r = check_du(fam, lambda, cfg);
    result = to_json(r);
    evidence = result["witnesses"];
    result.erase("witnesses");
    summary = fam.id + " du (lambda " + format_double(lambda) + "): " + (r.holds ? "holds" : "fails") + "\n";
    for (const auto& f : r.failures) summary += "  " + f + "\n";
  } else if (mode == "cond41") {
    args["eps_div"] = eps_div ? Json(*eps_div) : Json(nullptr);
    const Cond41Result r = check_41(fam, cfg, eps_div);
    result = to_json(r);
    evidence = result["witnesses"];
    result.erase("witnesses");
    summary = fam.id + " cond41: " + (r.holds ? "holds" : "fails") + "\n";
    for (const auto& f : r.failures) summary += "  " + f + "\n";
  } else {
    throw PreconditionError("discrete mode must be du, cond41 or tail");
  }
  Json report = report_skeleton(desc, cfg, "discrete", args);
  report["result"] = result;
  report["evidence"] = evidence;
  emit(c, report, summary, out);
  return definitive ? kExitOk : kExitInconclusive;
}

int cmd_taxonomy(const std::string& id, const UserFamily& u, const std::string& alpha_text, bool whole_family,
                 const Common& c, std::ostream& out) {
  const ScanConfig cfg = resolve_config(c);
  auto fam = resolve_family(id, u, cfg);
  if (whole_family == !alpha_text.empty()) throw PreconditionError("taxonomy needs exactly one of --alpha or --family");
  Json args{{"family", fam.spec.id}};
  Json result;
  std::string summary;
  int code = kExitOk;
  if (whole_family) {
    args["scope"] = "family";
    const FamilyResult r = classify_family(fam.spec, cfg);
    result = to_json(r);
    summary = fam.spec.id + ": " + std::string(to_string(r.label)) + "\n";
    for (const auto& p : r.points) summary += "  " + p.alpha.to_literal() + ": " + std::string(to_string(p.label)) + "\n";
  } else {
    const Parameter alpha = Parameter::parse(alpha_text);
    args["scope"] = "point";
    args["alpha"] = to_json(alpha);
    const PointResult r = classify_point(fam.spec, alpha, cfg);
    result = to_json(r);
    summary = fam.spec.id + " at " + alpha.to_literal() + ": " + std::string(to_string(r.label)) + "\n";
    for (const auto& [name, p] : r.profiles) {
      summary += "  " + name + ": " + std::string(to_string(p.verdict)) + ", limit " + p.limit_description + "\n";
    }
    if (r.label == PointLabel::inconclusive) code = kExitInconclusive;
  }
  Json report = report_skeleton(fam.description, cfg, "taxonomy", args);
  report["result"] = result;
  report["warnings"].push_back("labels are relative to the fixed sequence battery");
  emit(c, report, summary, out);
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chaoscope: numerical chaos-kind and sensitivity classifier for parametrized families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CHAOSCOPE_VERSION);

  Common common;
  UserFamily user;
  std::string family_id;
  std::string range;

  auto* list = app.add_subcommand("list", "list built-in families");
  std::string list_kind = "all";
  list->add_option("--kind", list_kind, "all, continuous or discrete");
  add_common(list, common);

  auto* classify = app.add_subcommand("classify", "chaos-kind verdict for a family");
  std::string strength = "weak";
  bool commensurable = false;
  classify->add_option("FAMILY", family_id, "family id");
  classify->add_option("--range", range, "scan range lo:hi");
  classify->add_option("--strength", strength, "strong or weak")->check(CLI::IsMember({"strong", "weak"}));
  classify->add_flag("--pairs-commensurable", commensurable, "snap beta to alpha * p / q");
  add_user_family(classify, user);
  add_common(classify, common);

  auto* windows = app.add_subcommand("windows", "crossings, windows and chains for one pair");
  std::string alpha_text;
  std::string beta_text;
  std::string kind_text = "cross";
  std::optional<double> eps;
  std::string plot_path;
  windows->add_option("FAMILY", family_id, "family id");
  windows->add_option("--alpha", alpha_text, "parameter literal")->required();
  windows->add_option("--beta", beta_text, "parameter literal")->required();
  windows->add_option("--kind", kind_text, "cross or disjoint")->check(CLI::IsMember({"cross", "disjoint"}));
  windows->add_option("--eps", eps, "list windows at this level instead of building a chain");
  windows->add_option("--range", range, "scan range lo:hi");
  windows->add_option("--plot-data", plot_path, "CSV of z, psi_alpha, psi_beta, |d| over the grid");
  add_user_family(windows, user);
  add_common(windows, common);

  auto* discrete = app.add_subcommand("discrete", "sequence criteria: du, cond41, tail");
  std::string mode;
  bool iteration = false;
  double lambda = 0.1;
  std::string x_text;
  std::string y_text;
  std::optional<double> eps_div;
  discrete->add_option("FAMILY", family_id, "sequence family id")->required();
  discrete->add_option("mode", mode, "du, cond41 or tail")->required()->check(CLI::IsMember({"du", "cond41", "tail"}));
  discrete->add_option("--lambda", lambda, "du threshold");
  discrete->add_option("--x", x_text, "tail: first parameter");
  discrete->add_option("--y", y_text, "tail: second parameter");
  discrete->add_option("--eps-div", eps_div, "cond41 divergence level (default 0.1)");
  discrete->add_flag("--iteration", iteration, "--expr is a step map in a and x started at u(0) = a");
  add_user_family(discrete, user);
  add_common(discrete, common);

  auto* taxonomy = app.add_subcommand("taxonomy", "sensitivity taxonomy of a point or a family");
  std::string tax_alpha;
  bool whole = false;
  taxonomy->add_option("FAMILY", family_id, "family id");
  taxonomy->add_option("--alpha", tax_alpha, "parameter literal");
  taxonomy->add_flag("--family", whole, "classify sampled points of the whole family");
  add_user_family(taxonomy, user);
  add_common(taxonomy, common);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list(list_kind, common, out);
    if (classify->parsed()) return cmd_classify(family_id, user, range, strength, commensurable, common, out);
    if (windows->parsed()) {
      return cmd_windows(family_id, user, alpha_text, beta_text, kind_text, eps, range, plot_path, common, out);
    }
    // "discrete <mode>" with --expr: the single positional is the mode.
    if (discrete->parsed()) return cmd_discrete(family_id, mode, user, iteration, lambda, x_text, y_text, eps_div, common, out);
    if (taxonomy->parsed()) return cmd_taxonomy(family_id, user, tax_alpha, whole, common, out);
  } catch (const EvaluationError& e) {
    err << "evaluation error: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  }
  return kExitUsage;
}

}  // namespace chaoscope
