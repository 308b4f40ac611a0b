#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "qpm/grating.hpp"
#include "qpm/numeric.hpp"

namespace qpm {

/// Target field amplitude A_target(z) at dk = pi / l_c.
///
/// The Gaussian family comes from a Gaussian nonlinearity envelope of width
/// sigma centred in a crystal of length L:
///   real:      c (erf(L / (2 sqrt2 sigma)) - erf((L - 2z) / (2 sqrt2 sigma)))
///   imaginary: i times the real form.
/// The real form rises from 0 at the input face to 2 c erf(L / (2 sqrt2 sigma))
/// at the output, so a grating that starts with an UP domain tracks it.
class TargetAmplitude {
public:
    enum class Family { gaussian_erf_real, gaussian_erf_imag, custom_tabulated };

    static TargetAmplitude gaussian_erf(double length, double sigma, double scale, bool imaginary = false);
    /// sigma = sigma_ratio * L and the tracking-optimal scale c = sqrt(2/pi) sigma.
    static TargetAmplitude gaussian_optimal(double length, double sigma_ratio = 0.25);
    /// Samples on a uniform z grid over [0, L], linearly interpolated.
    static TargetAmplitude tabulated(double length, std::vector<cplx> samples);

    /// target_eval. Throws DomainError for z outside [0, L].
    [[nodiscard]] cplx operator()(double z) const;

    [[nodiscard]] Family family() const noexcept { return family_; }
    [[nodiscard]] std::string_view family_name() const noexcept;
    [[nodiscard]] bool is_real() const;
    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }

private:
    Family family_ = Family::gaussian_erf_real;
    double length_ = 0.0;
    double sigma_ = 0.0;
    double scale_ = 0.0;
    std::vector<cplx> samples_;
};

/// sqrt(2/pi) * sigma: the largest scale whose steepest slope (2/pi) a
/// coherence-length grating can still follow.
inline double optimal_scale(double sigma) { return std::sqrt(2.0 / kPi) * sigma; }

/// PMF of the ideal Gaussian-apodised grating near its carrier,
/// (2/pi) int_0^L exp(-(z - L/2)^2 / (2 sigma^2)) exp(i delta z) dz,
/// where delta is the offset from the design mismatch pi / l_c. The 2/pi
/// factor is the first-harmonic weight of a +-1 square wave.
cplx gaussian_envelope_pmf(double length, double sigma, double delta);

/// Target PMF for the width annealer sampled on `dk` (absolute mismatch,
/// carrier at dk0).
PmfGrid gaussian_target_pmf(double length, double sigma, double dk0, std::span<const double> dk);

}  // namespace qpm
