#pragma once

// Poling-pattern designers.
//
// All greedy designers start with an UP domain and track the real part of the
// field amplitude at dk = pi / l_c (the sub-coherence designer tracks the
// complex amplitude). Widths are fixed; the annealer in anneal.hpp is the only
// designer that changes them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpm/grating.hpp"
#include "qpm/target.hpp"

namespace qpm {

enum class Algorithm { periodic, tambasco_blocks, domain_by_domain, annealed, sub_coherence };

std::string_view to_string(Algorithm algorithm);
/// Accepts "periodic", "tambasco-blocks", "domain-by-domain", "annealed",
/// "sub-coherence". Throws ConfigError otherwise.
Algorithm parse_algorithm(std::string_view id);

struct AnnealTraceRow {
    std::size_t iteration = 0;
    double temperature = 0.0;
    double energy = 0.0;
    bool accepted = false;
};

struct DesignReport {
    Grating grating;
    Algorithm algorithm = Algorithm::periodic;
    std::size_t iterations = 0;
    std::optional<double> initial_energy;  // annealing only
    std::optional<double> final_energy;    // annealing only
    std::vector<double> residuals;         // per-domain tracking error (greedy designers)
    std::vector<std::string> warnings;
    std::vector<AnnealTraceRow> trace;
    std::uint64_t rng_seed = 0;
    double wall_time_s = 0.0;

    /// Metadata for the sidecar file. Wall time is omitted so that artifacts
    /// are byte-reproducible.
    [[nodiscard]] nlohmann::json to_json() const;
};

struct DesignOptions {
    /// Domains narrower than this trigger a warning in the report.
    double min_domain_width = 1e-6;
};

/// N domains of width l_c, alternating and starting UP.
Grating design_periodic(std::size_t domains, double coherence_length);

/// Two-domain blocks (UP-UP, UP-DOWN, DOWN-UP) chosen greedily so that
/// Re A at the end of each block is closest to the target. Ties prefer
/// UP-UP, then UP-DOWN.
DesignReport design_tambasco_blocks(const TargetAmplitude& target, std::size_t blocks,
                                    double coherence_length);

/// Domain-by-domain rule: flip when the amplitude should keep moving in the
/// direction it moved over the previous domain, keep the orientation when it
/// should reverse. e >= 0 counts as "should increase".
DesignReport design_domain_by_domain(const TargetAmplitude& target, std::size_t domains,
                                     double coherence_length);

/// Greedy per-domain choice minimising |A_target(m w) - A_m| with A_m from
/// amplitude_at_domain_ends. Ties (within 1e-12 l_c) repeat the previous
/// orientation; the first domain ties to UP. Throws ConfigError for w > l_c.
DesignReport design_sub_coherence(const TargetAmplitude& target, double width, std::size_t domains,
                                  double coherence_length, const DesignOptions& options = {});

}  // namespace qpm
