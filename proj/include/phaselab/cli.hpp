#pragma once

// Experiment runner: every module exposed through subcommands with
// machine-readable JSON/CSV artifacts.  Exit codes: 0 ok, 1 assertion failure
// in *-check verbs, 2 config error, 3 capacity error.

#include <string>
#include <vector>

namespace phaselab::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace phaselab::cli
