#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "credo/scenario.hpp"

namespace credo::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,
    kCertificate = 3,
    kSizeLimit = 4,
};

struct CommandOptions {
    double tolerance = 1e-6;
    std::optional<std::string> observe;    // solve-game
    std::optional<std::string> event;      // condition
    std::optional<std::string> partition;  // c-condition, check-calibration
    std::string first = "apriori";         // compare-rules
    std::string second = "aposteriori";
};

struct CommandOutput {
    nlohmann::json result;  // payload under "result" in the result file
    std::string text;       // human-readable report
    int exit_code = kOk;
};

/// Runs one analysis subcommand on a loaded scenario. Library errors propagate.
CommandOutput run_command(const std::string& command, const Scenario& scenario, const CommandOptions& options);

/// Full result document: schema_version, command, scenario, tolerance, result.
nlohmann::json result_document(const std::string& command, const Scenario& scenario, const CommandOptions& options,
                               const CommandOutput& output);

/// Resolves --scenario: an existing file path, else a built-in name.
Scenario resolve_scenario(const std::string& spec);

/// Entry point of the command-line tool. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace credo::cli
