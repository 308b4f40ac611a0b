#include "qpm/target.hpp"

#include <cmath>

#include "qpm/errors.hpp"

namespace qpm {

TargetAmplitude TargetAmplitude::gaussian_erf(double length, double sigma, double scale, bool imaginary) {
    if (!(length > 0.0)) throw ConfigError("target.length", "crystal length must be positive");
    if (!(sigma > 0.0)) throw ConfigError("target.sigma", "sigma must be positive");
    if (!(scale > 0.0)) throw ConfigError("target.scale", "scale c must be positive");
    TargetAmplitude t;
    t.family_ = imaginary ? Family::gaussian_erf_imag : Family::gaussian_erf_real;
    t.length_ = length;
    t.sigma_ = sigma;
    t.scale_ = scale;
    return t;
}

TargetAmplitude TargetAmplitude::gaussian_optimal(double length, double sigma_ratio) {
    if (!(sigma_ratio > 0.0)) throw ConfigError("design.sigma_ratio", "sigma ratio must be positive");
    const double sigma = sigma_ratio * length;
    return gaussian_erf(length, sigma, optimal_scale(sigma));
}

TargetAmplitude TargetAmplitude::tabulated(double length, std::vector<cplx> samples) {
    if (!(length > 0.0)) throw ConfigError("target.length", "crystal length must be positive");
    if (samples.size() < 2) throw ConfigError("target.samples", "need at least two samples");
    TargetAmplitude t;
    t.family_ = Family::custom_tabulated;
    t.length_ = length;
    t.samples_ = std::move(samples);
    return t;
}

std::string_view TargetAmplitude::family_name() const noexcept {
    switch (family_) {
        case Family::gaussian_erf_real: return "gaussian-erf-real";
        case Family::gaussian_erf_imag: return "gaussian-erf-imag";
        case Family::custom_tabulated: return "custom-tabulated";
    }
    return "unknown";
}

bool TargetAmplitude::is_real() const {
    switch (family_) {
        case Family::gaussian_erf_real: return true;
        case Family::gaussian_erf_imag: return false;
        case Family::custom_tabulated:
            for (const auto& s : samples_) {
                if (s.imag() != 0.0) return false;
            }
            return true;
    }
    return false;
}

cplx TargetAmplitude::operator()(double z) const {
    if (!(z >= 0.0) || z > length_ * (1.0 + 1e-12)) {
        throw DomainError("target evaluated at z = " + format_number(z) + " m outside [0, " +
                          format_number(length_) + "]");
    }
    if (family_ == Family::custom_tabulated) {
        const double pos = std::min(z / length_, 1.0) * static_cast<double>(samples_.size() - 1);
        const auto lo = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
        const double t = pos - static_cast<double>(lo);
        return samples_[lo] + t * (samples_[lo + 1] - samples_[lo]);
    }
    const double denom = 2.0 * std::sqrt(2.0) * sigma_;
    const double value = scale_ * (std::erf(length_ / denom) - std::erf((length_ - 2.0 * z) / denom));
    return family_ == Family::gaussian_erf_real ? cplx{value, 0.0} : cplx{0.0, value};
}

cplx gaussian_envelope_pmf(double length, double sigma, double delta) {
    // Composite Simpson; the integrand spans at most a few oscillations over
    // the annealing grid, so 4096 panels are far past convergence.
    constexpr int panels = 4096;
    const double h = length / panels;
    cplx sum{0.0, 0.0};
    for (int j = 0; j <= panels; ++j) {
        const double z = h * j;
        const double u = (z - 0.5 * length) / sigma;
        const double weight = (j == 0 || j == panels) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        sum += weight * std::exp(-0.5 * u * u) * std::polar(1.0, delta * z);
    }
    return (2.0 / kPi) * sum * (h / 3.0);
}

PmfGrid gaussian_target_pmf(double length, double sigma, double dk0, std::span<const double> dk) {
    PmfGrid grid;
    grid.dk.assign(dk.begin(), dk.end());
    grid.dk0 = dk0;
    grid.source = "gaussian-envelope";
    grid.values.reserve(dk.size());
    for (double k : dk) grid.values.push_back(gaussian_envelope_pmf(length, sigma, k - dk0));
    grid.validate();
    return grid;
}

}  // namespace qpm
