#pragma once

// Length-parametrised design and the purity-vs-length sweep.
//
// A crystal is described by its domain count N at the coherence length, so
// L = N l_c. Every designer is handed the Gaussian target with sigma =
// sigma_ratio * L for that length.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qpm/algorithms.hpp"
#include "qpm/anneal.hpp"
#include "qpm/dispersion.hpp"
#include "qpm/spectrum.hpp"

namespace qpm {

struct DesignParams {
    Algorithm algorithm = Algorithm::periodic;
    double sigma_ratio = 0.25;  // sigma / L
    double width_ratio = 0.1;   // w / l_c, sub-coherence only
    AnnealConfig anneal;
    DesignOptions options;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Designs a crystal of `domains` coherence lengths. Blocks use N / 2 blocks
/// (N must be even); sub-coherence uses round(N / width_ratio) domains of
/// width L / that count; annealing seeds from domain-by-domain and keeps the
/// best of `anneal.restarts` runs, executed on up to `workers` threads.
DesignReport design_for_length(const DesignParams& params, std::size_t domains, double coherence_length,
                               std::size_t workers = 1);

/// One design per length (in units of l_c, each >= 20), in input order.
std::vector<DesignReport> design_for_length_sweep(const DesignParams& params, const std::vector<std::size_t>& lengths,
                                                  double coherence_length, std::size_t workers = 1);

struct SweepRow {
    std::size_t length_lc = 0;
    std::size_t domains = 0;
    double length_m = 0.0;
    double purity = 0.0;
    double bandwidth = 0.0;
    double pmf_width = 0.0;
    std::optional<double> energy;  // annealed designs
    std::string status = "ok";
};

/// Design plus optimised-pump purity per length. A failing length is kept as
/// a row whose status carries the error message.
std::vector<SweepRow> purity_vs_length(const DesignParams& params, const std::vector<std::size_t>& lengths,
                                       const DispersionModel& model, const ProcessSpec& spec,
                                       const PurityConfig& purity, std::size_t workers = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& comment = {});

}  // namespace qpm
