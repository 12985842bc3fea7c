// Command-line front end of blowup-lab.
//
//   blowup-lab <well|classify|simulate|check-assumptions|trace|region|sweep|chart>
//              [--config FILE] [--p R] [--m R] [--mu R] [--alpha R] [--beta R]
//              [--n INT] [--N INT] [--L R] [--horizon R] [--seed INT]
//              [--workers INT] [--out PATH] [--preset NAME]
//
// Values come from defaults, then the config file, then the flags.
// Exit codes: 0 success, 1 sweep counterexample, 2 configuration error,
// 3 sweep dominated by inconclusive runs.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace blowup {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInconclusive = 3;

/// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blowup
