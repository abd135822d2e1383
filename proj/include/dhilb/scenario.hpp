#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace dhilb {

inline constexpr const char* kReportSchema = "dhilb.report/1";
const char* tool_version();

struct RunOptions {
    std::optional<std::string> field;  // overrides the scenario's field
    unsigned threads = 1;
    bool timing = false;               // adds timing_ms (makes reports run-dependent)
    /// Runs the scenario as this task; a scenario naming a different task is rejected.
    std::optional<std::string> task;
};

struct RunOutcome {
    nlohmann::json report;
    std::string text;  // human-readable rendering of the same report
    int exit_code = 0;
};

/// Parses a YAML scenario and runs it. Never throws: every failure becomes an error report
/// with the exit code of its kind (1 validation, 2 budget, 3 mismatch, 4 internal).
RunOutcome run_scenario(const std::string& yaml_text, const std::string& source_name, const RunOptions& options = {});
RunOutcome run_scenario_file(const std::string& path, const RunOptions& options = {});

}  // namespace dhilb
