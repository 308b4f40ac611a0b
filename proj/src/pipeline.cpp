#include "qpm/pipeline.hpp"

#include <cmath>
#include <exception>

#include "qpm/errors.hpp"
#include "qpm/parallel.hpp"
#include "qpm/target.hpp"

namespace qpm {

void DesignParams::validate() const {
    if (!(sigma_ratio > 0.0) || !std::isfinite(sigma_ratio)) {
        throw ConfigError("design.sigma_ratio", "sigma_ratio must be positive");
    }
    if (!(width_ratio > 0.0 && width_ratio <= 1.0)) {
        throw ConfigError("design.width_ratio", "width_ratio must lie in (0, 1]");
    }
    if (!(options.min_domain_width >= 0.0)) {
        throw ConfigError("design.min_domain_width", "minimum domain width must be non-negative");
    }
    if (algorithm == Algorithm::annealed) anneal.validate();
}

DesignReport design_for_length(const DesignParams& params, std::size_t domains, double coherence_length,
                               std::size_t workers) {
    params.validate();
    if (domains == 0) throw ConfigError("crystal.domains", "need at least one domain");
    const double length = static_cast<double>(domains) * coherence_length;
    const auto target = TargetAmplitude::gaussian_optimal(length, params.sigma_ratio);

    switch (params.algorithm) {
        case Algorithm::periodic: {
            DesignReport r;
            r.algorithm = Algorithm::periodic;
            r.grating = design_periodic(domains, coherence_length);
            r.iterations = domains;
            return r;
        }
        case Algorithm::tambasco_blocks:
            if (domains % 2 != 0) throw ConfigError("crystal.domains", "the block designer needs an even domain count");
            return design_tambasco_blocks(target, domains / 2, coherence_length);
        case Algorithm::domain_by_domain:
            return design_domain_by_domain(target, domains, coherence_length);
        case Algorithm::annealed: {
            const Grating seed = design_domain_by_domain(target, domains, coherence_length).grating;
            const double dk0 = kPi / coherence_length;
            const auto grid = anneal_grid(params.anneal, dk0, length);
            const PmfGrid goal = gaussian_target_pmf(length, params.sigma_ratio * length, dk0, grid);
            auto reports = anneal_restarts(seed, goal, params.anneal, workers);
            return std::move(reports[best_by_energy(reports)]);
        }
        case Algorithm::sub_coherence: {
            const auto count = static_cast<std::size_t>(std::llround(static_cast<double>(domains) / params.width_ratio));
            return design_sub_coherence(target, length / static_cast<double>(count), count, coherence_length,
                                        params.options);
        }
    }
    throw ConfigError("design.algorithm", "unhandled algorithm");
}

namespace {

void check_lengths(const std::vector<std::size_t>& lengths) {
    if (lengths.empty()) throw ConfigError("sweep.lengths_lc", "no lengths given");
    for (auto n : lengths) {
        if (n < 20) throw ConfigError("sweep.lengths_lc", "lengths must be at least 20 coherence lengths");
    }
}

}  // namespace

std::vector<DesignReport> design_for_length_sweep(const DesignParams& params, const std::vector<std::size_t>& lengths,
                                                  double coherence_length, std::size_t workers) {
    check_lengths(lengths);
    std::vector<DesignReport> out(lengths.size());
    parallel_for(lengths.size(), workers,
                 [&](std::size_t j) { out[j] = design_for_length(params, lengths[j], coherence_length); });
    return out;
}

std::vector<SweepRow> purity_vs_length(const DesignParams& params, const std::vector<std::size_t>& lengths,
                                       const DispersionModel& model, const ProcessSpec& spec,
                                       const PurityConfig& purity, std::size_t workers) {
    check_lengths(lengths);
    params.validate();
    const double lc = coherence_length(model, spec);
    PurityConfig per_row = purity;
    per_row.grid.workers = 1;

    std::vector<SweepRow> rows(lengths.size());
    parallel_for(lengths.size(), workers, [&](std::size_t j) {
        SweepRow& row = rows[j];
        row.length_lc = lengths[j];
        row.length_m = static_cast<double>(lengths[j]) * lc;
        try {
            const DesignReport report = design_for_length(params, lengths[j], lc);
            row.domains = report.grating.size();
            row.energy = report.final_energy;
            const auto eval = evaluate_purity(PhaseMatching::from_grating(report.grating), model, spec, per_row);
            row.purity = eval.purity;
            row.bandwidth = eval.bandwidth;
            row.pmf_width = eval.pmf_width;
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& comment) {
    std::string out;
    for (const auto& line : comment) out += "# " + line + "\n";
    out += "length_lc,domains,length_m,purity,bandwidth_rad_s,pmf_width_rad_s,energy,status\n";
    for (const auto& r : rows) {
        std::string status = r.status;
        for (char& c : status) {
            if (c == ',' || c == '\n') c = ';';
        }
        out += std::to_string(r.length_lc) + "," + std::to_string(r.domains) + "," + format_number(r.length_m) + "," +
               format_number(r.purity) + "," + format_number(r.bandwidth) + "," + format_number(r.pmf_width) + "," +
               (r.energy ? format_number(*r.energy) : std::string()) + "," + status + "\n";
    }
    return out;
}

}  // namespace qpm
