#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xrayq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitProcessing = 2;

// Entry point shared by the xrayq binary and the tests. `args` excludes the
// program name. Subcommands: assess, equalize, enhance, train, bench, synth.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xrayq::cli
