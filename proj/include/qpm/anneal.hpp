#pragma once

// Simulated annealing of block widths.
//
// The seed grating is merged into blocks of equal orientation; only block
// widths move. Each iteration scales every block width by an independent
// factor 1 + u, u ~ U(-f, f), and evaluates
//   E = sqrt(sum_dk (|phi_target(dk)| - |phi(dk)|)^2) / phi_ref
// on the target's dk grid. phi_ref defaults to 2L/pi, the peak PMF of a
// periodic grating of the seed's length, which makes E dimensionless.
//
// Schedule (default, literal): a configuration better than the best seen so
// far becomes the new best; otherwise it is accepted with probability
// exp(-E / T). A rejected configuration restores the best one and lowers T by
// dT. The run stops when E_min < E_t, T <= 0 or the iteration cap is hit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "qpm/algorithms.hpp"
#include "qpm/grating.hpp"

namespace qpm {

struct AnnealConfig {
    double initial_temperature = 0.1;
    double temperature_step = 1e-6;  // initial_temperature / 1e5
    double energy_threshold = 1e-9;
    double max_perturbation = 0.01;
    std::size_t grid_samples = 257;
    /// Grid spans dk0 +- grid_half_span_factor * pi / L.
    double grid_half_span_factor = 8.0;
    std::uint64_t seed = 1;
    std::size_t max_iterations = 200000;
    std::size_t restarts = 5;
    /// Lower T on every iteration instead of only on rejections.
    bool per_iteration_cooling = false;
    /// Accept worse configurations with exp(-(E - E_min) / T) instead of exp(-E / T).
    bool metropolis_delta = false;
    bool record_trace = false;
    /// Energy normalisation; 0 selects 2L/pi of the seed.
    double energy_scale = 0.0;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// The default energy grid for a crystal of length L designed for dk0.
std::vector<double> anneal_grid(const AnnealConfig& config, double dk0, double length);

/// Energy of `grating` against `target` (see file comment).
double pmf_energy(const Grating& grating, const PmfGrid& target, double energy_scale);

/// One annealing run using `config.seed`.
DesignReport anneal_widths(const Grating& seed, const PmfGrid& target, const AnnealConfig& config);

/// `config.restarts` independent runs seeded seed + 0, seed + 1, ...; the
/// reports are returned in seed order. Runs execute on up to `workers` threads
/// and the result does not depend on the worker count.
std::vector<DesignReport> anneal_restarts(const Grating& seed, const PmfGrid& target,
                                          const AnnealConfig& config, std::size_t workers = 1);

/// Index of the lowest-energy report.
std::size_t best_by_energy(std::span<const DesignReport> reports);

}  // namespace qpm
