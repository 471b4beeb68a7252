#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chaoscope/classifier.hpp"
#include "chaoscope/cli.hpp"
#include "chaoscope/discrete.hpp"
#include "chaoscope/errors.hpp"
#include "chaoscope/report.hpp"
#include "chaoscope/taxonomy.hpp"
#include "chaoscope/window_scanner.hpp"

namespace py = pybind11;
using namespace chaoscope;

namespace {

// Results cross the boundary as JSON text; the Python wrapper decodes them.
ScanConfig config_from(const std::string& text) {
  if (text.empty()) return default_config();
  return config_from_json(Json::parse(text));
}

std::string list_json(const std::string& kind) {
  Json arr = Json::array();
  if (kind != "discrete")
    for (const auto& f : builtin_catalog()) arr.push_back(describe(f));
  if (kind != "continuous")
    for (const auto& f : builtin_sequences()) arr.push_back(describe(f));
  return arr.dump();
}

std::string classify_json(const std::string& family, const std::string& range, const std::string& strength,
                          bool commensurable, const std::string& config) {
  const ScanConfig cfg = config_from(config);
  const FamilySpec spec = find_family(family, cfg.seed);
  const Verdict v = classify_kind(spec, cfg, RealInterval::parse(range), parse_strength(strength),
                                  DependenceOptions{commensurable});
  Json j = verdict_result(v);
  j["evidence"] = Json::array();
  for (const auto& e : v.evidence) j["evidence"].push_back(to_json(e));
  return j.dump();
}

std::string crossings_json(const std::string& family, const std::string& alpha, const std::string& beta,
                           const std::string& range, const std::string& config) {
  const ScanConfig cfg = config_from(config);
  const FamilySpec spec = find_family(family, cfg.seed);
  Json arr = Json::array();
  for (const auto& c :
       scan_crossings(spec, Parameter::parse(alpha), Parameter::parse(beta), RealInterval::parse(range), cfg))
    arr.push_back(to_json(c));
  return arr.dump();
}

std::string tail_json(const std::string& family, const std::string& x, const std::string& y,
                      const std::string& config) {
  const ScanConfig cfg = config_from(config);
  return to_json(tail_stats(find_sequence(family), Parameter::parse(x), Parameter::parse(y), cfg)).dump();
}

std::string point_json(const std::string& family, const std::string& alpha, const std::string& config) {
  const ScanConfig cfg = config_from(config);
  return to_json(classify_point(find_family(family, cfg.seed), Parameter::parse(alpha), cfg)).dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{"chaoscope"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(argv, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "chaoscope core";
  m.attr("__version__") = CHAOSCOPE_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

  m.def("default_config", [] { return to_json(default_config()).dump(); });
  m.def("list_families", &list_json, py::arg("kind") = "all");
  m.def("evaluate",
        [](const std::string& family, const std::string& a, double x) {
          return eval(find_family(family), Parameter::parse(a), x);
        },
        py::arg("family"), py::arg("a"), py::arg("x"));
  m.def("classify", &classify_json, py::arg("family"), py::arg("range"), py::arg("strength") = "weak",
        py::arg("commensurable") = false, py::arg("config") = "",
        py::call_guard<py::gil_scoped_release>());
  m.def("scan_crossings", &crossings_json, py::arg("family"), py::arg("alpha"), py::arg("beta"), py::arg("range"),
        py::arg("config") = "");
  m.def("tail_stats", &tail_json, py::arg("family"), py::arg("x"), py::arg("y"), py::arg("config") = "");
  m.def("classify_point", &point_json, py::arg("family"), py::arg("alpha"), py::arg("config") = "");
  m.def("run_cli", &cli, py::arg("args"));
}
