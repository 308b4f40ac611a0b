#pragma once

// qpmdesign subcommands. Each returns the process exit status:
//   0 success, 1 runtime failure, 2 configuration or validation failure.
// Failures print exactly one line to `err`:
//   error kind=<config|runtime> field=<key> message="<text>"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "qpm/config.hpp"

namespace qpm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Command-line overrides; set values win over the config file.
struct Overrides {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> parallel;
    std::optional<std::filesystem::path> poling;
    std::optional<std::string> format;
};

std::string tool_version();

/// Loads the config (defaults when none is given) and applies overrides.
RunConfig resolve_config(const Overrides& overrides);

/// Writes poling.csv, design.json, amplitude_trace.csv, pmf_scan.csv and,
/// when requested, anneal_trace.csv.
int cmd_design(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes jsa.csv and schmidt.csv; prints "purity=<p> bandwidth_rad_s=<b>".
int cmd_purity(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes sweep.csv.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Converts a poling file (or an inline design) to the configured format.
int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Prints and writes gvm.json: group velocities, GVM residual, PMF angle.
int cmd_gvm_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpm
