#include "qpm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include <Eigen/SVD>

#include "qpm/errors.hpp"
#include "qpm/parallel.hpp"

namespace qpm {

double PumpEnvelope::operator()(double omega_sum) const {
    const double x = (omega_sum - center_omega) / bandwidth;
    return std::exp(-0.5 * x * x);
}

PhaseMatching PhaseMatching::from_grating(const Grating& grating) {
    if (grating.empty()) throw ConfigError("grating", "cannot evaluate the PMF of an empty grating");
    auto eval = std::make_shared<const PmfEvaluator>(grating);
    PhaseMatching pm;
    pm.fn_ = [eval](double dk) { return (*eval)(dk); };
    pm.scan_half_span_ = 16.0 * kPi / grating.length();
    pm.description_ = "grating of " + std::to_string(grating.size()) + " domains, L = " +
                      format_number(grating.length(), 9) + " m";
    return pm;
}

PhaseMatching PhaseMatching::from_table(PmfGrid table) {
    table.validate();
    auto shared = std::make_shared<const PmfGrid>(std::move(table));
    PhaseMatching pm;
    pm.fn_ = [shared](double dk) { return shared->interpolate(dk); };
    const double centre = shared->dk0;
    pm.scan_half_span_ = std::min(centre - shared->dk.front(), shared->dk.back() - centre);
    if (!(pm.scan_half_span_ > 0.0)) throw ConfigError("pmf_grid", "table does not bracket its carrier dk0");
    pm.description_ = "tabulated PMF (" + shared->source + ")";
    return pm;
}

namespace {

double intensity(const PhaseMatching& pm, double dk) { return std::norm(pm(dk)); }

// Bisection for the half-maximum crossing between an inside point (above
// half) and an outside point (below half).
double crossing(const PhaseMatching& pm, double inside, double outside, double half) {
    for (int it = 0; it < 200 && std::abs(outside - inside) > 1e-13 * std::abs(inside); ++it) {
        const double mid = 0.5 * (inside + outside);
        (intensity(pm, mid) >= half ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
}

}  // namespace

double pmf_width(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec) {
    const double centre = std::abs(central_delta_k(model, spec));
    const double span = pm.scan_half_span();
    constexpr std::size_t samples = 2049;
    const auto dk = uniform_grid(centre, span, samples);
    std::vector<double> value(samples);
    for (std::size_t j = 0; j < samples; ++j) value[j] = intensity(pm, dk[j]);
    const auto peak_it = std::max_element(value.begin(), value.end());
    auto peak = static_cast<std::size_t>(peak_it - value.begin());
    if (!(*peak_it > 0.0)) throw DomainError("PMF vanishes over the scan window; degenerate grating");

    // Refine the peak between its neighbours (golden section on |phi|^2).
    double lo = dk[peak == 0 ? 0 : peak - 1];
    double hi = dk[std::min(peak + 1, samples - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80; ++it) {
        const double a = hi - g * (hi - lo);
        const double b = lo + g * (hi - lo);
        if (intensity(pm, a) >= intensity(pm, b)) {
            hi = b;
        } else {
            lo = a;
        }
    }
    const double peak_dk = 0.5 * (lo + hi);
    const double half = 0.5 * std::max(intensity(pm, peak_dk), *peak_it);

    std::size_t right = peak;
    while (right + 1 < samples && value[right + 1] >= half) ++right;
    std::size_t left = peak;
    while (left > 0 && value[left - 1] >= half) --left;
    if (right + 1 >= samples || left == 0) {
        throw DomainError("PMF has no half-maximum crossing inside the scan window; degenerate grating");
    }
    const double fwhm_dk = crossing(pm, dk[right], dk[right + 1], half) - crossing(pm, dk[left], dk[left - 1], half);

    const double t = spec.temperature_c;
    const double slope = std::abs(inverse_group_velocity(model, spec.idler_axis, spec.idler_omega(), t) -
                                  inverse_group_velocity(model, spec.signal_axis, spec.signal_omega(), t));
    if (!(slope > 0.0)) throw DomainError("signal and idler group velocities coincide; antidiagonal width undefined");
    return fwhm_dk / slope;
}

double JointSpectrum::signal_step() const {
    return signal_omega.size() > 1 ? signal_omega[1] - signal_omega[0] : 1.0;
}

double JointSpectrum::idler_step() const {
    return idler_omega.size() > 1 ? idler_omega[1] - idler_omega[0] : 1.0;
}

void JointSpectrum::normalize() {
    const double norm2 = amplitude.squaredNorm() * signal_step() * idler_step();
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("joint spectrum is identically zero");
    amplitude /= std::sqrt(norm2);
    normalized = true;
}

PmfMatrix sample_pmf_matrix(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                            const SpectrumGrid& grid) {
    if (grid.points < 2) throw ConfigError("spectrum.grid", "grid needs at least two points per axis");
    if (!(grid.window_factor > 0.0)) throw ConfigError("spectrum.window_factor", "window factor must be positive");
    spec.validate();

    PmfMatrix out;
    out.pmf_width = pmf_width(pm, model, spec);
    out.pump_center = spec.pump_omega();
    const double half_span = 0.5 * grid.window_factor * out.pmf_width;
    out.signal_omega = uniform_grid(spec.signal_omega(), half_span, grid.points);
    out.idler_omega = uniform_grid(spec.idler_omega(), half_span, grid.points);
    const double sign = mismatch_sign(model, spec);

    const auto n = static_cast<Eigen::Index>(grid.points);
    out.values.resize(n, n);
    parallel_for(grid.points, grid.workers, [&](std::size_t r) {
        const double ws = out.signal_omega[r];
        for (std::size_t c = 0; c < grid.points; ++c) {
            const double dk = sign * delta_k(model, spec, ws, out.idler_omega[c]);
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = pm(dk);
        }
    });
    return out;
}

JointSpectrum apply_pump(const PmfMatrix& pmf, const std::optional<PumpEnvelope>& pump) {
    JointSpectrum js;
    js.signal_omega = pmf.signal_omega;
    js.idler_omega = pmf.idler_omega;
    js.amplitude = pmf.values;
    if (pump) {
        if (!(pump->bandwidth > 0.0)) throw ConfigError("pump.bandwidth", "pump bandwidth must be positive");
        for (Eigen::Index r = 0; r < js.amplitude.rows(); ++r) {
            for (Eigen::Index c = 0; c < js.amplitude.cols(); ++c) {
                js.amplitude(r, c) *= (*pump)(js.signal_omega[static_cast<std::size_t>(r)] +
                                              js.idler_omega[static_cast<std::size_t>(c)]);
            }
        }
    }
    js.normalize();
    return js;
}

JointSpectrum build_jsa(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                        const std::optional<PumpEnvelope>& pump, const SpectrumGrid& grid) {
    return apply_pump(sample_pmf_matrix(pm, model, spec, grid), pump);
}

SchmidtResult schmidt(const Eigen::MatrixXcd& matrix) {
    if (matrix.size() == 0 || matrix.cwiseAbs().maxCoeff() == 0.0) {
        throw DomainError("Schmidt decomposition of an all-zero matrix");
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(matrix);
    const Eigen::VectorXd sv = svd.singularValues();
    const double total = sv.squaredNorm();
    SchmidtResult r;
    r.coefficients.reserve(static_cast<std::size_t>(sv.size()));
    double purity = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double b = sv(k) / std::sqrt(total);
        r.coefficients.push_back(b);
        purity += b * b * b * b;
    }
    r.purity = purity;
    r.schmidt_number = 1.0 / purity;
    return r;
}

SchmidtResult schmidt(const JointSpectrum& js) {
    return schmidt(Eigen::MatrixXcd(js.amplitude * std::sqrt(js.signal_step() * js.idler_step())));
}

namespace {

double purity_at(const PmfMatrix& pmf, double bandwidth) {
    return schmidt(apply_pump(pmf, PumpEnvelope{pmf.pump_center, bandwidth})).purity;
}

// Golden-section maximum of purity over x = log(bandwidth) in [a, b].
std::pair<double, double> golden_max(const PmfMatrix& pmf, double a, double b, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = purity_at(pmf, std::exp(x1));
    double f2 = purity_at(pmf, std::exp(x2));
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = purity_at(pmf, std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = purity_at(pmf, std::exp(x2));
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

PumpOptimum optimize_pump_bandwidth(const PmfMatrix& pmf, double initial_guess) {
    if (!(initial_guess > 0.0)) throw ConfigError("pump.initial_guess", "initial bandwidth guess must be positive");
    constexpr double tol = 1e-3;
    const double centre = std::log(initial_guess);
    for (double decades : {1.0, 2.0}) {
        const double a = centre - decades * std::log(10.0);
        const double b = centre + decades * std::log(10.0);
        const auto [x, p] = golden_max(pmf, a, b, tol);
        if (x - a > 2.0 * tol && b - x > 2.0 * tol) return {std::exp(x), p};
    }
    throw DomainError("purity is monotone in pump bandwidth over [0.01, 100] x the matched guess");
}

PumpOptimum optimize_pump_bandwidth(const PmfMatrix& pmf) { return optimize_pump_bandwidth(pmf, pmf.pmf_width); }

PurityEvaluation evaluate_purity(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                                 const PurityConfig& config) {
    const PmfMatrix pmf = sample_pmf_matrix(pm, model, spec, config.grid);
    PurityEvaluation out;
    out.pmf_width = pmf.pmf_width;
    out.bandwidth = config.fixed_bandwidth ? *config.fixed_bandwidth : optimize_pump_bandwidth(pmf).bandwidth;
    out.jsa = apply_pump(pmf, PumpEnvelope{pmf.pump_center, out.bandwidth});
    out.schmidt = schmidt(out.jsa);
    out.purity = out.schmidt.purity;
    return out;
}

namespace {

void append_comment(std::string& out, const std::vector<std::string>& comment) {
    for (const auto& line : comment) out += "# " + line + "\n";
}

}  // namespace

std::string jsa_magnitude_csv(const JointSpectrum& js, const std::vector<std::string>& comment) {
    std::string out;
    append_comment(out, comment);
    out += "omega_s_rad_s\\omega_i_rad_s";
    for (double wi : js.idler_omega) out += "," + format_number(wi);
    out += "\n";
    for (std::size_t r = 0; r < js.signal_omega.size(); ++r) {
        out += format_number(js.signal_omega[r]);
        for (std::size_t c = 0; c < js.idler_omega.size(); ++c) {
            out += "," + format_number(std::abs(js.amplitude(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))));
        }
        out += "\n";
    }
    return out;
}

std::string schmidt_csv(const SchmidtResult& result, const std::vector<std::string>& comment) {
    std::string out;
    append_comment(out, comment);
    out += "k,coefficient\n";
    for (std::size_t k = 0; k < result.coefficients.size(); ++k) {
        out += std::to_string(k) + "," + format_number(result.coefficients[k]) + "\n";
    }
    return out;
}

}  // namespace qpm
