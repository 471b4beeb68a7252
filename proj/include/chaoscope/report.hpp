#pragma once

#include <string>

#include <json.hpp>

#include "chaoscope/classifier.hpp"
#include "chaoscope/discrete.hpp"
#include "chaoscope/taxonomy.hpp"
#include "chaoscope/window_scanner.hpp"

namespace chaoscope {

using Json = nlohmann::ordered_json;

/// Non-finite values become the strings "inf", "-inf", "nan".
Json number(double v);

Json to_json(const ScanConfig& c);
/// Overrides the defaults with the keys present; unknown keys and invalid
/// combinations raise ConfigError.
ScanConfig config_from_json(const Json& j);
/// Accepts either a bare config object or a report carrying "config".
ScanConfig load_config_file(const std::string& path);

Json to_json(const Parameter& p);
Json to_json(const RealInterval& r);
Json to_json(const Crossing& c);
Json to_json(const Window& w);
Json to_json(const GapWitness& g);
Json to_json(const WindowChain& c);
Json to_json(const PairEvidence& e);
Json to_json(const DependenceResult& r, bool with_evidence = false);
Json to_json(const SensitivityResult& r);
Json verdict_result(const Verdict& v);  // everything but the evidence list
Json to_json(const TailStats& s);
Json to_json(const DuResult& r);
Json to_json(const Cond41Result& r);
Json to_json(const ConvergenceProfile& p);
Json to_json(const PointResult& r);
Json to_json(const FamilyResult& r);
Json describe(const FamilySpec& f);
Json describe(const SequenceFamily& f);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace chaoscope
