#pragma once
// Runs a scenario's checks in declared order and assembles a deterministic
// JSON report; replays the witnesses recorded in a report.

#include "pscalc/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pscalc {

inline constexpr const char* kVersion = "1.0.0";

// Command-line overrides of the scenario bounds.
struct RunOptions {
    std::optional<int> L, L_big, W;
    std::optional<Backend> backend;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> cache_dir;
    bool timing = false;
};

Bounds effective_bounds(const Scenario& sc, const RunOptions& opt);

enum ExitCode { kExitPass = 0, kExitViolation = 1, kExitInconclusive = 2, kExitError = 3 };

struct RunResult {
    ojson report;
    int exit_code = kExitError;
    std::size_t cache_hits = 0;
};

RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

struct ReplayResult {
    int exit_code = kExitError;
    std::vector<std::string> lines;
};

// Re-verifies every witness of the report (or only check `index`): witness
// expressions are re-evaluated in a freshly built representation; witnesses
// without an expression are confirmed by re-running their check.
ReplayResult replay_report(const ojson& report, std::optional<std::size_t> index = std::nullopt);

}  // namespace pscalc
