#pragma once

// Material dispersion for the down-conversion process: wavenumbers, phase
// mismatch, coherence length and group-velocity diagnostics.
//
// Two model families are supported:
//   * ktp-sellmeier     tabulated Sellmeier laws per crystal axis, with a
//                       quadratic temperature correction; loaded from a
//                       data file (see data/ktp_sellmeier.json)
//   * linear-synthetic  wavenumbers affine in frequency around reference
//                       points; used for tests that must not depend on a
//                       coefficient transcription
//
// All quantities are SI: angular frequency in rad/s, wavenumber in rad/m,
// lengths in m. Temperatures are in degrees Celsius.

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpm/numeric.hpp"

namespace qpm {

/// n^2 = a + sum_j b_j / (1 - c_j / lambda^2) - d * lambda^2, lambda in um.
/// Temperature correction: dn = n1(lambda) dT + n2(lambda) dT^2 with
/// n_k(lambda) = sum_m coeff_k[m] / lambda^m and dT = T - T_ref.
struct SellmeierLaw {
    double a = 1.0;
    std::vector<std::pair<double, double>> poles;  // (b_j, c_j)
    double ir = 0.0;                                // d
    std::array<double, 4> thermal_linear{};
    std::array<double, 4> thermal_quadratic{};
    double reference_temperature_c = 25.0;

    [[nodiscard]] double index(double lambda_um, double temperature_c) const;
};

/// k(omega) = k_ref + inverse_group_velocity * (omega - omega_ref).
struct LinearLaw {
    double k_ref = 0.0;
    double inverse_group_velocity = 0.0;  // s/m
    double omega_ref = 0.0;

    [[nodiscard]] double wavenumber(double omega) const {
        return k_ref + inverse_group_velocity * (omega - omega_ref);
    }
};

struct WavelengthWindow {
    double min_m = 0.0;
    double max_m = 0.0;

    [[nodiscard]] bool contains(double wavelength_m) const {
        const double slack = 1e-12 * max_m;
        return wavelength_m >= min_m - slack && wavelength_m <= max_m + slack;
    }
    [[nodiscard]] std::string describe() const;
};

struct LinearSyntheticParams {
    double k0 = 0.0;  // mismatch at the reference point, rad/m
    double tau_p = 0.0, tau_s = 0.0, tau_i = 0.0;
    double omega_p = 0.0, omega_s = 0.0, omega_i = 0.0;
    double k_signal_ref = 0.0;  // 0 -> omega_s * 1.5 / c
    double k_idler_ref = 0.0;   // 0 -> omega_i * 1.5 / c
    WavelengthWindow window{100e-9, 100e-6};
};

class DispersionModel {
public:
    enum class Kind { ktp_sellmeier, linear_synthetic };

    /// Parse a dispersion data file. Throws ConfigError on malformed input.
    static DispersionModel from_file(const std::filesystem::path& path);
    static DispersionModel from_json(const nlohmann::json& doc);

    /// Synthetic model with axes "p", "s", "i". The pump axis reference
    /// wavenumber is k0 + k_s,ref + k_i,ref so that delta_k at the reference
    /// frequencies is exactly k0.
    static DispersionModel linear_synthetic(const LinearSyntheticParams& params);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] std::string_view kind_name() const noexcept;
    [[nodiscard]] const std::string& citation() const noexcept { return citation_; }
    [[nodiscard]] const WavelengthWindow& window() const noexcept { return window_; }
    [[nodiscard]] std::vector<std::string> axes() const;

    /// Wavenumber n(omega, T) * omega / c (or the affine law). Throws
    /// DomainError outside the validity window or for an unknown axis.
    [[nodiscard]] double wavenumber(std::string_view axis, double omega,
                                    double temperature_c = 25.0) const;

    [[nodiscard]] nlohmann::json describe() const;

private:
    struct Axis {
        std::string label;
        std::variant<SellmeierLaw, LinearLaw> law;
    };

    [[nodiscard]] const Axis& find_axis(std::string_view label) const;

    Kind kind_ = Kind::linear_synthetic;
    std::string citation_;
    WavelengthWindow window_;
    std::vector<Axis> axes_;
};

/// Wavelengths and polarization assignment for one down-conversion process.
struct ProcessSpec {
    double pump_wavelength = 791e-9;
    double signal_wavelength = 1582e-9;
    double idler_wavelength = 1582e-9;
    std::string pump_axis = "y";
    std::string signal_axis = "y";
    std::string idler_axis = "z";
    double temperature_c = 25.0;

    /// Checks 1/lp = 1/ls + 1/li to 1e-9 relative.
    void validate() const;

    [[nodiscard]] double pump_omega() const { return wavelength_to_omega(pump_wavelength); }
    [[nodiscard]] double signal_omega() const { return wavelength_to_omega(signal_wavelength); }
    [[nodiscard]] double idler_omega() const { return wavelength_to_omega(idler_wavelength); }

    [[nodiscard]] nlohmann::json describe() const;

    /// Type-II y -> y + z in KTP, 791 nm -> 1582 nm + 1582 nm.
    static ProcessSpec ktp_type2_degenerate();
    /// Matching process for a linear-synthetic model (axes p/s/i).
    static ProcessSpec synthetic(const LinearSyntheticParams& params);
};

/// k_p(ws + wi) - k_s(ws) - k_i(wi).
double delta_k(const DispersionModel& model, const ProcessSpec& spec,
               double omega_s, double omega_i);

/// delta_k at the central signal/idler frequencies.
double central_delta_k(const DispersionModel& model, const ProcessSpec& spec);

/// +1 or -1: the sign of the central mismatch. Gratings are designed for the
/// positive mismatch pi / l_c; the spectrum pipeline evaluates the PMF at
/// mismatch_sign * delta_k. Since the nonlinearity profile is real,
/// phi(-dk) = conj(phi(dk)) and the sign never changes |phi| or purity.
int mismatch_sign(const DispersionModel& model, const ProcessSpec& spec);

/// l_c = pi / |delta_k_0|. Throws DomainError when the process is already
/// phase-matched (delta_k_0 == 0) and poling is undefined.
double coherence_length(const DispersionModel& model, const ProcessSpec& spec);

/// dk/domega by central finite difference with step `step_fraction * omega`.
double inverse_group_velocity(const DispersionModel& model, std::string_view axis,
                              double omega, double temperature_c = 25.0,
                              double step_fraction = 1e-6);

struct GvmReport {
    double k1_pump = 0.0;    // s/m
    double k1_signal = 0.0;  // s/m
    double k1_idler = 0.0;   // s/m
    double symmetric_residual = 0.0;  // k'_p - (k'_s + k'_i) / 2
    double pmf_angle_deg = 0.0;       // atan(-(k'_p - k'_s) / (k'_p - k'_i))

    [[nodiscard]] nlohmann::json to_json() const;
};

GvmReport gvm_report(const DispersionModel& model, const ProcessSpec& spec);

}  // namespace qpm
