#include "qpm/anneal.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "qpm/errors.hpp"
#include "qpm/parallel.hpp"

namespace qpm {

namespace {

// |phi| of a block configuration on a fixed dk grid.
//
// phi(k) = (1 / ik) sum_b c_b exp(ik z_b) over block boundaries z_b, with
// c_b the sign jump across the boundary. On a uniform grid each boundary
// phase advances by a fixed rotation per sample, so no trig is needed in the
// inner loop. Grids that reach dk = 0 fall back to the per-block sinc form.
class EnergyEvaluator {
public:
    EnergyEvaluator(const PmfGrid& target, std::span<const int> signs, double scale)
        : dk_(target.dk), signs_(signs.begin(), signs.end()), scale_(scale) {
        target_abs_.reserve(target.values.size());
        for (const auto& v : target.values) target_abs_.push_back(std::abs(v));
        const double step = dk_.size() > 1 ? (dk_.back() - dk_.front()) / static_cast<double>(dk_.size() - 1) : 0.0;
        uniform_ = dk_.size() > 1;
        for (std::size_t j = 0; j < dk_.size(); ++j) {
            const double expected = dk_.front() + step * static_cast<double>(j);
            if (std::abs(dk_[j] - expected) > 1e-9 * std::abs(step)) uniform_ = false;
            if (dk_[j] == 0.0) uniform_ = false;
        }
        if (uniform_ && dk_.front() < 0.0 && dk_.back() > 0.0) uniform_ = false;
        step_ = step;
    }

    double operator()(std::span<const double> widths) const {
        return uniform_ ? rotating(widths) : direct(widths);
    }

private:
    double rotating(std::span<const double> widths) const {
        const std::size_t nb = widths.size() + 1;
        phase_.resize(nb);
        rotor_.resize(nb);
        jump_.resize(nb);
        double z = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const int before = b == 0 ? 0 : signs_[b - 1];
            const int after = b + 1 == nb ? 0 : signs_[b];
            jump_[b] = static_cast<double>(before - after);
            phase_[b] = std::polar(1.0, dk_.front() * z);
            rotor_[b] = std::polar(1.0, step_ * z);
            if (b + 1 < nb) z += widths[b];
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < dk_.size(); ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t b = 0; b < nb; ++b) {
                acc += jump_[b] * phase_[b];
                phase_[b] *= rotor_[b];
            }
            const double diff = target_abs_[j] - std::abs(acc) / std::abs(dk_[j]);
            sum += diff * diff;
        }
        return std::sqrt(sum) / scale_;
    }

    double direct(std::span<const double> widths) const {
        double sum = 0.0;
        for (std::size_t j = 0; j < dk_.size(); ++j) {
            const double k = dk_[j];
            cplx acc{0.0, 0.0};
            double z = 0.0;
            for (std::size_t n = 0; n < widths.size(); ++n) {
                acc += static_cast<double>(signs_[n]) * widths[n] * sinc(0.5 * k * widths[n]) *
                       std::polar(1.0, k * (z + 0.5 * widths[n]));
                z += widths[n];
            }
            const double diff = target_abs_[j] - std::abs(acc);
            sum += diff * diff;
        }
        return std::sqrt(sum) / scale_;
    }

    std::vector<double> dk_;
    std::vector<double> target_abs_;
    std::vector<int> signs_;
    double scale_;
    double step_ = 0.0;
    bool uniform_ = false;
    mutable std::vector<cplx> phase_;
    mutable std::vector<cplx> rotor_;
    mutable std::vector<double> jump_;
};

double resolve_scale(const AnnealConfig& config, double length) {
    return config.energy_scale > 0.0 ? config.energy_scale : 2.0 * length / kPi;
}

}  // namespace

void AnnealConfig::validate() const {
    if (!(initial_temperature > 0.0)) throw ConfigError("anneal.initial_temperature", "T must be positive");
    if (!(temperature_step > 0.0 && temperature_step < initial_temperature)) {
        throw ConfigError("anneal.temperature_step", "temperature step must lie in (0, T)");
    }
    if (!(max_perturbation > 0.0 && max_perturbation <= 0.05)) {
        throw ConfigError("anneal.max_perturbation", "perturbation fraction must lie in (0, 0.05]");
    }
    if (grid_samples < 16) throw ConfigError("anneal.grid_samples", "energy grid needs at least 16 samples");
    if (!(grid_half_span_factor > 0.0)) throw ConfigError("anneal.grid_half_span_factor", "must be positive");
    if (!(energy_threshold >= 0.0)) throw ConfigError("anneal.energy_threshold", "must be non-negative");
    if (restarts == 0) throw ConfigError("anneal.restarts", "need at least one run");
    if (energy_scale < 0.0) throw ConfigError("anneal.energy_scale", "must be non-negative");
}

nlohmann::json AnnealConfig::to_json() const {
    return {{"initial_temperature", initial_temperature},
            {"temperature_step", temperature_step},
            {"energy_threshold", energy_threshold},
            {"max_perturbation", max_perturbation},
            {"grid_samples", grid_samples},
            {"grid_half_span_factor", grid_half_span_factor},
            {"seed", seed},
            {"max_iterations", max_iterations},
            {"restarts", restarts},
            {"per_iteration_cooling", per_iteration_cooling},
            {"metropolis_delta", metropolis_delta},
            {"energy_scale", energy_scale}};
}

std::vector<double> anneal_grid(const AnnealConfig& config, double dk0, double length) {
    return uniform_grid(dk0, config.grid_half_span_factor * kPi / length, config.grid_samples);
}

double pmf_energy(const Grating& grating, const PmfGrid& target, double energy_scale) {
    const Grating blocks = grating.merged();
    std::vector<double> widths;
    std::vector<int> signs;
    for (const auto& d : blocks.domains()) {
        widths.push_back(d.width);
        signs.push_back(sign_of(d.orientation));
    }
    return EnergyEvaluator(target, signs, energy_scale)(widths);
}

DesignReport anneal_widths(const Grating& seed, const PmfGrid& target, const AnnealConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    target.validate();
    if (seed.empty()) throw ConfigError("anneal.seed", "seed grating is empty");

    // Blocks of equal orientation; the domain list is rebuilt from these at
    // the end with each original domain scaled by its block's factor, so the
    // domain count and every orientation are preserved.
    std::vector<std::size_t> block_of(seed.size());
    std::vector<double> widths;
    std::vector<int> signs;
    for (std::size_t i = 0; i < seed.size(); ++i) {
        const int s = sign_of(seed[i].orientation);
        if (signs.empty() || signs.back() != s) {
            signs.push_back(s);
            widths.push_back(0.0);
        }
        widths.back() += seed[i].width;
        block_of[i] = widths.size() - 1;
    }
    const std::vector<double> seed_widths = widths;
    const double seed_length = seed.length();

    const EnergyEvaluator energy(target, signs, resolve_scale(config, seed.length()));
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> perturb(-config.max_perturbation, config.max_perturbation);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    DesignReport report;
    report.algorithm = Algorithm::annealed;
    report.rng_seed = config.seed;

    std::vector<double> best = widths;
    std::vector<double> current = widths;
    std::vector<double> trial(widths.size());
    double e_min = energy(best);
    report.initial_energy = e_min;
    double temperature = config.initial_temperature;
    std::size_t iteration = 0;

    while (e_min >= config.energy_threshold && temperature > 0.0 && iteration < config.max_iterations) {
        ++iteration;
        double trial_length = 0.0;
        for (std::size_t n = 0; n < current.size(); ++n) {
            double w;
            do {
                w = current[n] * (1.0 + perturb(rng));
            } while (!(w > 0.0));
            trial[n] = w;
            trial_length += w;
        }
        // Keep the crystal length fixed.
        const double rescale = seed_length / trial_length;
        for (double& w : trial) w *= rescale;
        const double e = energy(trial);
        bool accepted = true;
        if (e < e_min) {
            e_min = e;
            best = trial;
            current = trial;
        } else {
            const double exponent = config.metropolis_delta ? (e - e_min) : e;
            accepted = unit(rng) < std::exp(-exponent / temperature);
            if (accepted) {
                current = trial;
            } else {
                current = best;
            }
            if (!accepted && !config.per_iteration_cooling) temperature -= config.temperature_step;
        }
        if (config.per_iteration_cooling) temperature -= config.temperature_step;
        if (config.record_trace) report.trace.push_back({iteration, temperature, e, accepted});
    }

    std::vector<Domain> domains(seed.domains().begin(), seed.domains().end());
    for (std::size_t i = 0; i < domains.size(); ++i) {
        const std::size_t b = block_of[i];
        domains[i].width *= best[b] / seed_widths[b];
    }
    report.grating = Grating(std::move(domains));
    report.final_energy = e_min;
    report.iterations = iteration;
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<DesignReport> anneal_restarts(const Grating& seed, const PmfGrid& target, const AnnealConfig& config,
                                          std::size_t workers) {
    config.validate();
    std::vector<DesignReport> reports(config.restarts);
    parallel_for(config.restarts, workers, [&](std::size_t r) {
        AnnealConfig run = config;
        run.seed = config.seed + r;
        reports[r] = anneal_widths(seed, target, run);
    });
    return reports;
}

std::size_t best_by_energy(std::span<const DesignReport> reports) {
    if (reports.empty()) throw ConfigError("anneal", "no annealing reports");
    std::size_t best = 0;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].final_energy.value_or(INFINITY) < reports[best].final_energy.value_or(INFINITY)) best = i;
    }
    return best;
}

}  // namespace qpm
