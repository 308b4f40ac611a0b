#include "qpm/algorithms.hpp"

#include <chrono>
#include <cmath>

#include "qpm/errors.hpp"
#include "qpm/poling_io.hpp"

namespace qpm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_real_target(const TargetAmplitude& target) {
    if (!target.is_real()) {
        throw ConfigError("design.target", "coherence-length designers track only the real part; "
                                           "use sub-coherence for complex targets");
    }
}

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, std::string(field) + " must be positive");
}

// Change of Re A, in units of 2 l_c / pi, when a domain of width l_c with
// orientation o is appended at position index (0-based) at dk = pi / l_c.
int level_step(std::size_t index, Orientation o) {
    return (index % 2 == 0 ? 1 : -1) * sign_of(o);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::periodic: return "periodic";
        case Algorithm::tambasco_blocks: return "tambasco-blocks";
        case Algorithm::domain_by_domain: return "domain-by-domain";
        case Algorithm::annealed: return "annealed";
        case Algorithm::sub_coherence: return "sub-coherence";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view id) {
    for (auto a : {Algorithm::periodic, Algorithm::tambasco_blocks, Algorithm::domain_by_domain,
                   Algorithm::annealed, Algorithm::sub_coherence}) {
        if (to_string(a) == id) return a;
    }
    throw ConfigError("design.algorithm", "unknown algorithm '" + std::string(id) + "'");
}

nlohmann::json DesignReport::to_json() const {
    nlohmann::json j{{"algorithm", to_string(algorithm)},
                     {"domains", grating.size()},
                     {"length_m", grating.length()},
                     {"iterations", iterations},
                     {"content_hash", content_hash(grating)}};
    if (initial_energy) j["initial_energy"] = *initial_energy;
    if (final_energy) j["final_energy"] = *final_energy;
    if (algorithm == Algorithm::annealed) j["rng_seed"] = rng_seed;
    if (!residuals.empty()) {
        double worst = 0.0;
        for (double r : residuals) worst = std::max(worst, std::abs(r));
        j["max_tracking_residual_m"] = worst;
    }
    if (!warnings.empty()) j["warnings"] = warnings;
    return j;
}

Grating design_periodic(std::size_t domains, double coherence_length) {
    if (domains == 0) throw ConfigError("design.domains", "need at least one domain");
    require_positive(coherence_length, "coherence_length");
    std::vector<Orientation> o(domains);
    for (std::size_t n = 0; n < domains; ++n) o[n] = n % 2 == 0 ? Orientation::up : Orientation::down;
    return Grating::uniform(o, coherence_length);
}

DesignReport design_tambasco_blocks(const TargetAmplitude& target, std::size_t blocks, double coherence_length) {
    const auto start = Clock::now();
    if (blocks == 0) throw ConfigError("design.blocks", "need at least one block");
    require_positive(coherence_length, "coherence_length");
    require_real_target(target);

    struct Choice {
        Orientation first, second;
        int levels;
    };
    // Every block starts at an even domain index, where the phase is +1.
    constexpr Choice choices[] = {
        {Orientation::up, Orientation::up, 0},
        {Orientation::up, Orientation::down, 2},
        {Orientation::down, Orientation::up, -2},
    };
    const double quantum = 2.0 * coherence_length / kPi;

    DesignReport report;
    report.algorithm = Algorithm::tambasco_blocks;
    std::vector<Orientation> o;
    o.reserve(2 * blocks);
    long level = 0;
    for (std::size_t m = 0; m < blocks; ++m) {
        const double wanted = target(std::min(2.0 * static_cast<double>(m + 1) * coherence_length,
                                              target.length())).real();
        const Choice* best = &choices[0];
        double best_err = std::abs(wanted - static_cast<double>(level + best->levels) * quantum);
        for (const auto& c : choices) {
            const double err = std::abs(wanted - static_cast<double>(level + c.levels) * quantum);
            if (err < best_err) {
                best = &c;
                best_err = err;
            }
        }
        o.push_back(best->first);
        o.push_back(best->second);
        level += best->levels;
        report.residuals.push_back(wanted - static_cast<double>(level) * quantum);
    }
    report.grating = Grating::uniform(o, coherence_length);
    report.iterations = blocks;
    report.wall_time_s = seconds_since(start);
    return report;
}

DesignReport design_domain_by_domain(const TargetAmplitude& target, std::size_t domains, double coherence_length) {
    const auto start = Clock::now();
    if (domains < 2) throw ConfigError("design.domains", "domain-by-domain needs at least two domains");
    require_positive(coherence_length, "coherence_length");
    require_real_target(target);

    const double quantum = 2.0 * coherence_length / kPi;
    DesignReport report;
    report.algorithm = Algorithm::domain_by_domain;

    std::vector<Orientation> o{Orientation::up};
    long previous = 0;
    long current = level_step(0, Orientation::up);
    report.residuals.push_back(target(coherence_length).real() - static_cast<double>(current) * quantum);
    for (std::size_t n = 1; n < domains; ++n) {
        const double z_next = std::min(static_cast<double>(n + 1) * coherence_length, target.length());
        const double error = target(z_next).real() - static_cast<double>(current) * quantum;
        const bool was_increasing = current >= previous;
        const bool want_increase = error >= 0.0;
        // Keeping the orientation reverses the slope; flipping continues it.
        const Orientation next = want_increase == was_increasing ? flip(o.back()) : o.back();
        o.push_back(next);
        previous = current;
        current += level_step(n, next);
        report.residuals.push_back(target(z_next).real() - static_cast<double>(current) * quantum);
    }
    report.grating = Grating::uniform(o, coherence_length);
    report.iterations = domains;
    report.wall_time_s = seconds_since(start);
    return report;
}

DesignReport design_sub_coherence(const TargetAmplitude& target, double width, std::size_t domains,
                                  double coherence_length, const DesignOptions& options) {
    const auto start = Clock::now();
    if (domains == 0) throw ConfigError("design.domains", "need at least one domain");
    require_positive(width, "design.width");
    require_positive(coherence_length, "coherence_length");
    if (width > coherence_length * (1.0 + 1e-12)) {
        throw ConfigError("design.width", "sub-coherence width exceeds the coherence length; "
                                          "use domain-by-domain");
    }

    DesignReport report;
    report.algorithm = Algorithm::sub_coherence;
    if (width < options.min_domain_width) {
        report.warnings.push_back("domain width " + format_number(width * 1e6, 6) +
                                  " um is below the practical poling limit of " +
                                  format_number(options.min_domain_width * 1e6, 6) + " um");
    }

    const double phase_step = kPi * width / coherence_length;
    const cplx prefactor = (coherence_length / kPi) * (std::polar(1.0, -phase_step) - 1.0);
    const double tie_tolerance = 1e-12 * coherence_length;

    std::vector<Orientation> o;
    o.reserve(domains);
    cplx running{0.0, 0.0};
    for (std::size_t m = 1; m <= domains; ++m) {
        const cplx phase = std::polar(1.0, phase_step * static_cast<double>(m));
        const cplx wanted = target(std::min(width * static_cast<double>(m), target.length()));
        const double e_up = std::abs(wanted - prefactor * (running + phase));
        const double e_down = std::abs(wanted - prefactor * (running - phase));
        Orientation next;
        if (std::abs(e_up - e_down) <= tie_tolerance) {
            next = o.empty() ? Orientation::up : o.back();
        } else {
            next = e_up < e_down ? Orientation::up : Orientation::down;
        }
        o.push_back(next);
        running += static_cast<double>(sign_of(next)) * phase;
        report.residuals.push_back(next == Orientation::up ? e_up : e_down);
    }
    report.grating = Grating::uniform(o, width);
    report.iterations = domains;
    report.wall_time_s = seconds_since(start);
    return report;
}

}  // namespace qpm
