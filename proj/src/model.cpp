#include "chaoscope/model.hpp"

#include <algorithm>
#include <limits>

#include "chaoscope/errors.hpp"

namespace chaoscope {

std::string_view to_string(WindowKind k) { return k == WindowKind::cross ? "cross" : "disjoint"; }

std::string_view to_string(Strength s) { return s == Strength::strong ? "strong" : "weak"; }

WindowKind parse_window_kind(std::string_view s) {
  if (s == "cross") return WindowKind::cross;
  if (s == "disjoint") return WindowKind::disjoint;
  throw ParseError("window kind must be 'cross' or 'disjoint', got '" + std::string(s) + "'");
}

Strength parse_strength(std::string_view s) {
  if (s == "strong") return Strength::strong;
  if (s == "weak") return Strength::weak;
  throw ParseError("strength must be 'strong' or 'weak', got '" + std::string(s) + "'");
}

std::string_view to_string(ChainFailureReason r) {
  switch (r) {
    case ChainFailureReason::none: return "none";
    case ChainFailureReason::no_window: return "no_window";
    case ChainFailureReason::no_disjoint_window: return "no_disjoint_window";
    case ChainFailureReason::gap_too_small: return "gap_too_small";
  }
  return "none";
}

std::string_view to_string(VerdictLabel l) {
  switch (l) {
    case VerdictLabel::kind1: return "kind1";
    case VerdictLabel::kind2: return "kind2";
    case VerdictLabel::kind3: return "kind3";
    case VerdictLabel::sensitive_only: return "sensitive_only";
    case VerdictLabel::insensitive: return "insensitive";
    case VerdictLabel::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double WindowChain::min_gap() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& g : gaps) m = std::min(m, g.value);
  return m;
}

}  // namespace chaoscope
