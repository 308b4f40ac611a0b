#pragma once

// Joint spectral amplitude f(ws, wi) = phi(dk(ws, wi)) * alpha(ws + wi) and
// heralded-photon purity from its Schmidt decomposition.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qpm/dispersion.hpp"
#include "qpm/grating.hpp"

namespace qpm {

/// Gaussian pump envelope exp(-(W - w0p)^2 / (2 bandwidth^2)) with W = ws + wi.
struct PumpEnvelope {
    double center_omega = 0.0;  // rad/s
    double bandwidth = 0.0;     // rad/s, standard deviation of the amplitude

    [[nodiscard]] double operator()(double omega_sum) const;
};

/// A phase-matching function of the (sign-normalised) mismatch, either a
/// grating or a tabulated surrogate.
class PhaseMatching {
public:
    static PhaseMatching from_grating(const Grating& grating);
    static PhaseMatching from_table(PmfGrid table);

    [[nodiscard]] cplx operator()(double dk) const { return fn_(dk); }
    /// Half-width of the dk window scanned around the carrier by pmf_width.
    [[nodiscard]] double scan_half_span() const noexcept { return scan_half_span_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

private:
    std::function<cplx(double)> fn_;
    double scan_half_span_ = 0.0;
    std::string description_;
};

/// Full width at half maximum of |phi|^2 along the antidiagonal
/// (ws0 + d, wi0 - d), expressed in the signal-frequency offset d (rad/s).
/// The dk-domain width is mapped through the local slope |k'_i - k'_s|.
/// Throws DomainError when no half-maximum crossing exists in the scan.
double pmf_width(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec);

struct SpectrumGrid {
    std::size_t points = 100;    // per axis
    double window_factor = 8.0;  // axis span in units of pmf_width
    std::size_t workers = 1;     // row-parallel evaluation
};

/// PMF sampled on the JSA grid, before the pump is applied. Reused across
/// pump bandwidths.
struct PmfMatrix {
    std::vector<double> signal_omega;
    std::vector<double> idler_omega;
    Eigen::MatrixXcd values;  // rows: signal, cols: idler
    double pmf_width = 0.0;
    double pump_center = 0.0;
};

struct JointSpectrum {
    std::vector<double> signal_omega;
    std::vector<double> idler_omega;
    Eigen::MatrixXcd amplitude;
    bool normalized = false;

    [[nodiscard]] double signal_step() const;
    [[nodiscard]] double idler_step() const;
    /// Scales so that sum |f|^2 dws dwi = 1. Throws DomainError if f == 0.
    void normalize();
};

struct SchmidtResult {
    std::vector<double> coefficients;  // b_k, descending, sum b_k^2 = 1
    double purity = 0.0;               // sum b_k^4
    double schmidt_number = 0.0;       // 1 / purity
};

PmfMatrix sample_pmf_matrix(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                            const SpectrumGrid& grid);

/// f = phi * alpha, normalised. `pump == nullopt` is the infinite-bandwidth
/// limit alpha == 1.
JointSpectrum apply_pump(const PmfMatrix& pmf, const std::optional<PumpEnvelope>& pump);

JointSpectrum build_jsa(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                        const std::optional<PumpEnvelope>& pump, const SpectrumGrid& grid = {});

/// Singular values of f * sqrt(dws dwi), normalised to b_k.
SchmidtResult schmidt(const JointSpectrum& js);
/// Same for an arbitrary matrix (treated as a unit-step grid).
SchmidtResult schmidt(const Eigen::MatrixXcd& matrix);

struct PumpOptimum {
    double bandwidth = 0.0;
    double purity = 0.0;
};

/// Golden-section maximisation of purity over log(bandwidth) in
/// [0.1, 10] x `initial_guess` down to 1e-3 relative. If the maximum sits on
/// the bracket edge the bracket is widened once to [0.01, 100] x; a second
/// edge hit throws DomainError.
PumpOptimum optimize_pump_bandwidth(const PmfMatrix& pmf, double initial_guess);
/// Initial guess = pmf_width.
PumpOptimum optimize_pump_bandwidth(const PmfMatrix& pmf);

struct PurityConfig {
    SpectrumGrid grid;
    std::optional<double> fixed_bandwidth;  // rad/s; nullopt -> optimise
};

struct PurityEvaluation {
    double purity = 0.0;
    double bandwidth = 0.0;
    double pmf_width = 0.0;
    SchmidtResult schmidt;
    JointSpectrum jsa;
};

PurityEvaluation evaluate_purity(const PhaseMatching& pm, const DispersionModel& model, const ProcessSpec& spec,
                                 const PurityConfig& config = {});

/// CSV renderings. `comment` lines are prefixed with "# ".
std::string jsa_magnitude_csv(const JointSpectrum& js, const std::vector<std::string>& comment = {});
std::string schmidt_csv(const SchmidtResult& result, const std::vector<std::string>& comment = {});

}  // namespace qpm
