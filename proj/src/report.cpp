#include "chaoscope/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "chaoscope/errors.hpp"

namespace chaoscope {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const ScanConfig& c) {
  Json j;
  j["grid_points"] = c.grid_points;
  j["eps_top"] = c.eps_top;
  j["eps_ratio"] = c.eps_ratio;
  j["ladder_depth"] = c.ladder_depth;
  j["tol_eq"] = c.tol_eq;
  j["tol_zero"] = c.tol_zero;
  j["refine_iters"] = c.refine_iters;
  j["mu_min"] = c.mu_min;
  j["pair_samples"] = c.pair_samples;
  j["nbhd_shrink"] = c.nbhd_shrink;
  j["tail_start"] = c.tail_start;
  j["tail_len"] = c.tail_len;
  j["seed"] = c.seed;
  j["nbhd_levels"] = c.nbhd_levels;
  j["beta_attempts"] = c.beta_attempts;
  j["range_cap"] = c.range_cap;
  j["tol_liminf"] = c.tol_liminf;
  j["du_samples"] = c.du_samples;
  j["du_grid"] = c.du_grid;
  j["battery_terms"] = c.battery_terms;
  j["disorder_fraction"] = c.disorder_fraction;
  j["boundary_margin"] = c.boundary_margin;
  j["omega_samples"] = c.omega_samples;
  return j;
}

namespace {

template <typename T>
void read_field(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field ") + key + ": " + e.what());
  }
}

}  // namespace

ScanConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const Json known = to_json(ScanConfig{});
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ScanConfig c;
  read_field(j, "grid_points", c.grid_points);
  read_field(j, "eps_top", c.eps_top);
  read_field(j, "eps_ratio", c.eps_ratio);
  read_field(j, "ladder_depth", c.ladder_depth);
  read_field(j, "tol_eq", c.tol_eq);
  read_field(j, "tol_zero", c.tol_zero);
  read_field(j, "refine_iters", c.refine_iters);
  read_field(j, "mu_min", c.mu_min);
  read_field(j, "pair_samples", c.pair_samples);
  read_field(j, "nbhd_shrink", c.nbhd_shrink);
  read_field(j, "tail_start", c.tail_start);
  read_field(j, "tail_len", c.tail_len);
  read_field(j, "seed", c.seed);
  read_field(j, "nbhd_levels", c.nbhd_levels);
  read_field(j, "beta_attempts", c.beta_attempts);
  read_field(j, "range_cap", c.range_cap);
  read_field(j, "tol_liminf", c.tol_liminf);
  read_field(j, "du_samples", c.du_samples);
  read_field(j, "du_grid", c.du_grid);
  read_field(j, "battery_terms", c.battery_terms);
  read_field(j, "disorder_fraction", c.disorder_fraction);
  read_field(j, "boundary_margin", c.boundary_margin);
  read_field(j, "omega_samples", c.omega_samples);
  c.validate();
  return c;
}

ScanConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("tool_version") && j.contains("config")) return config_from_json(j["config"]);
  return config_from_json(j);
}

Json to_json(const Parameter& p) {
  return Json{{"literal", p.to_literal()}, {"value", p.value()}, {"class", to_string(p.arithmetic_class())}};
}

Json to_json(const RealInterval& r) {
  return Json{{"lo", number(r.lo)}, {"hi", number(r.hi)}, {"lo_open", r.lo_open}, {"hi_open", r.hi_open}};
}

Json to_json(const Crossing& c) {
  return Json{{"z", c.z}, {"tangential", c.tangential}, {"residual", c.residual}};
}

Json to_json(const Window& w) {
  return Json{{"kind", to_string(w.kind)},        {"x1", w.x1},
              {"y1", w.y1},                       {"eps", w.eps},
              {"interior_min", w.interior_min},   {"interior_max", w.interior_max},
              {"boundary_x1", w.boundary_x1},     {"boundary_y1", w.boundary_y1}};
}

Json to_json(const GapWitness& g) {
  return Json{{"w", g.w}, {"value", g.value}, {"gap_lo", g.gap_lo}, {"gap_hi", g.gap_hi}};
}

Json to_json(const WindowChain& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["succeeded"] = c.succeeded();
  j["reason"] = to_string(c.reason);
  j["deepest_level"] = c.deepest_level;
  j["failed_eps"] = c.failed_eps;
  j["mu_candidate"] = c.mu_candidate;
  j["min_gap"] = number(c.min_gap());
  j["pairwise_disjoint"] = c.pairwise_disjoint;
  j["range"] = to_json(c.range);
  j["grid_points"] = c.grid_points;
  j["windows"] = Json::array();
  for (const auto& w : c.windows) j["windows"].push_back(to_json(w));
  j["gaps"] = Json::array();
  for (const auto& g : c.gaps) j["gaps"].push_back(to_json(g));
  return j;
}

Json to_json(const PairEvidence& e) {
  Json j;
  j["alpha"] = to_json(e.alpha);
  j["beta"] = to_json(e.beta);
  j["chi"] = e.chi ? to_json(*e.chi) : Json(nullptr);
  j["radius"] = e.radius;
  j["attempts"] = e.attempts;
  j["commensurable"] = e.commensurable;
  j["note"] = e.note;
  j["chain"] = to_json(e.chain);
  return j;
}

Json to_json(const DependenceResult& r, bool with_evidence) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["strength"] = to_string(r.strength);
  j["holds"] = r.holds;
  j["mu_estimate"] = r.mu_estimate;
  j["resolution_limited"] = r.resolution_limited;
  j["pairs_checked"] = r.evidence.size();
  j["failures"] = r.failures;
  if (with_evidence) {
    j["evidence"] = Json::array();
    for (const auto& e : r.evidence) j["evidence"].push_back(to_json(e));
  }
  return j;
}

Json to_json(const SensitivityResult& r) {
  Json j;
  j["holds"] = r.holds;
  j["lambda_estimate"] = r.lambda_estimate;
  j["lambda_requested"] = r.lambda_requested ? Json(*r.lambda_requested) : Json(nullptr);
  j["failing_x"] = r.failing_x ? to_json(*r.failing_x) : Json(nullptr);
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) {
    j["witnesses"].push_back(Json{{"x", to_json(w.x)}, {"y", to_json(w.y)}, {"radius", w.radius}, {"z", w.z},
                                  {"value", w.value}});
  }
  return j;
}

Json verdict_result(const Verdict& v) {
  Json j;
  j["label"] = to_string(v.label);
  j["mu_estimate"] = v.mu_estimate;
  j["strength"] = to_string(v.strength);
  j["scan_range"] = to_json(v.scan_range);
  j["cross"] = to_json(v.cross);
  j["disjoint"] = to_json(v.disjoint);
  j["sensitivity"] = to_json(v.sensitivity);
  j["notes"] = v.notes;
  return j;
}

Json to_json(const TailStats& s) {
  return Json{{"limsup_est", s.limsup_est},   {"liminf_est", s.liminf_est},     {"n_lo", s.n_lo},
              {"n_hi", s.n_hi},               {"argmax_index", s.argmax_index}, {"argmin_index", s.argmin_index}};
}

Json to_json(const DuResult& r) {
  Json j;
  j["holds"] = r.holds;
  j["lambda"] = r.lambda;
  j["failures"] = r.failures;
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) {
    Json s = Json::array();
    for (const auto& row : w.study) {
      s.push_back(Json{{"tail_len", row.tail_len}, {"limsup_est", row.limsup_est}, {"liminf_est", row.liminf_est}});
    }
    j["witnesses"].push_back(Json{{"x", to_json(w.x)},
                                  {"v", to_json(w.v)},
                                  {"far", w.far},
                                  {"found", w.found},
                                  {"y", to_json(w.y)},
                                  {"stats", to_json(w.stats)},
                                  {"candidates", w.candidates},
                                  {"tail_doubling", s}});
  }
  return j;
}

Json to_json(const Cond41Result& r) {
  Json j;
  j["holds"] = r.holds;
  j["eps_div"] = r.eps_div;
  j["checkpoints"] = r.checkpoints;
  j["failures"] = r.failures;
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) {
    j["witnesses"].push_back(Json{{"alpha", to_json(w.alpha)},
                                  {"chi", to_json(w.chi)},
                                  {"radius", w.radius},
                                  {"beta", to_json(w.beta)},
                                  {"condition1", w.cond1},
                                  {"condition2", w.cond2},
                                  {"min_after_last_checkpoint", w.min_after_last},
                                  {"max_after_last_checkpoint", w.max_after_last},
                                  {"attempts", w.attempts}});
  }
  return j;
}

Json to_json(const ConvergenceProfile& p) {
  Json j;
  j["verdict"] = to_string(p.verdict);
  j["pointwise_ok"] = p.pointwise_ok;
  j["limit"] = to_string(p.limit);
  j["limit_description"] = p.limit_description;
  j["limit_param"] = p.limit_param ? to_json(*p.limit_param) : Json(nullptr);
  j["sup_norms"] = Json::array();
  for (const auto& [n, s] : p.sup_norms) j["sup_norms"].push_back(Json::array({n, s}));
  j["excluded_moments"] = p.excluded_moments;
  return j;
}

Json to_json(const PointResult& r) {
  Json j;
  j["alpha"] = to_json(r.alpha);
  j["label"] = to_string(r.label);
  j["exceptional_class"] = r.exceptional_class ? Json(to_string(*r.exceptional_class)) : Json(nullptr);
  j["divergent_fraction"] = r.divergent_fraction;
  j["notes"] = r.notes;
  j["profiles"] = Json::array();
  for (const auto& [name, p] : r.profiles) {
    Json e = to_json(p);
    e["sequence"] = name;
    j["profiles"].push_back(std::move(e));
  }
  return j;
}

Json to_json(const FamilyResult& r) {
  Json j;
  j["label"] = to_string(r.label);
  j["points"] = Json::array();
  for (const auto& p : r.points) j["points"].push_back(to_json(p));
  return j;
}

Json describe(const FamilySpec& f) {
  Json j;
  j["id"] = f.id;
  j["kind"] = "continuous";
  j["omega"] = to_json(f.omega);
  j["theta"] = to_json(f.theta);
  j["codomain_hint"] = f.codomain_hint ? to_json(*f.codomain_hint) : Json(nullptr);
  j["sample_omega"] = to_json(f.sample_omega);
  j["default_range"] = f.default_range ? to_json(*f.default_range) : Json(nullptr);
  j["requires_tags"] = f.requires_tags;
  j["notes"] = f.notes;
  return j;
}

Json describe(const SequenceFamily& f) {
  Json j;
  j["id"] = f.id;
  j["kind"] = "discrete";
  j["omega"] = to_json(f.omega);
  j["sample_omega"] = to_json(f.sample_omega);
  j["operator"] = f.is_iteration() ? "iteration" : "direct";
  j["notes"] = f.notes;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace chaoscope
