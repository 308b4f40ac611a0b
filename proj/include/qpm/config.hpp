#pragma once

// Run configuration for the command-line tool.
//
// The file is JSON. Physical quantities are strings with an explicit unit:
//   lengths      "791 nm", "2 um", "2 mm", "0.002 m"
//   temperature  "25 C"
//   bandwidth    "1.4e13 rad/s" or "auto"
// A bare number in a length, temperature or bandwidth field is rejected.
// Unknown keys are rejected so that typos do not silently fall back to
// defaults. See docs/FORMATS.md for the full key list.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpm/dispersion.hpp"
#include "qpm/pipeline.hpp"
#include "qpm/poling_io.hpp"
#include "qpm/spectrum.hpp"

namespace qpm {

enum class Unit { length, temperature, angular_frequency };

/// Parses "<number> <unit>" into SI (K offsets are not applied: temperature
/// stays in Celsius). Throws ConfigError naming `field`.
double parse_quantity(const nlohmann::json& value, std::string_view field, Unit unit);

/// Directory searched for data files named by a relative path:
/// $QPMDESIGN_DATA_DIR if set, else the directory compiled into the tool.
std::filesystem::path default_data_dir();

struct RunConfig {
    std::filesystem::path dispersion_file;
    ProcessSpec process;
    std::optional<double> crystal_length;  // m; smallest even N with N l_c >= length
    std::optional<std::size_t> domains;    // explicit N, wins over crystal_length
    DesignParams design;
    PurityConfig purity;
    std::size_t pmf_scan_points = 1025;
    std::vector<std::size_t> sweep_lengths;
    std::optional<std::filesystem::path> poling_file;
    PolingFormat poling_format = PolingFormat::csv_boundaries;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    std::size_t parallel = 1;

    /// `base_dir` resolves relative file names before the data directory.
    static RunConfig from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
    static RunConfig from_file(const std::filesystem::path& path);

    /// Checks cross-field constraints and that referenced files exist.
    void validate() const;

    [[nodiscard]] DispersionModel load_model() const;
    /// Domain count at the coherence length: `domains` if set, else the
    /// smallest even N with N l_c >= crystal_length. Throws ConfigError if
    /// neither is given.
    [[nodiscard]] std::size_t resolve_domains(double coherence_length) const;

    /// Fully resolved configuration in canonical SI form; embedded in every
    /// artifact.
    [[nodiscard]] nlohmann::json to_json() const;
};

}  // namespace qpm
