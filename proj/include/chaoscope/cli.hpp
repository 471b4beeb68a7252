#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chaoscope {

/// Exit codes: 0 definitive result, 3 inconclusive, 1 usage error,
/// 2 evaluation error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEvaluation = 2;
inline constexpr int kExitInconclusive = 3;

/// Runs one `chaoscope` invocation. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chaoscope
