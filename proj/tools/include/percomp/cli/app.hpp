#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "percomp/competition.hpp"

namespace percomp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// `{p, q, s1, s2, T, seed, survived_y, survived_b, colored_y, colored_b, green_count}`.
nlohmann::json summary_json(const RunSummary& summary);

/// Entry point of the `percomp` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace percomp::cli
