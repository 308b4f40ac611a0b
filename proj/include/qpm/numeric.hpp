#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace qpm {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline double wavelength_to_omega(double wavelength_m) {
    return 2.0 * kPi * kSpeedOfLight / wavelength_m;
}

inline double omega_to_wavelength(double omega) {
    return 2.0 * kPi * kSpeedOfLight / omega;
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// Locale-independent decimal formatting. `significant == 0` gives the
/// shortest representation that round-trips.
inline std::string format_number(double value, int significant = 0) {
    char buf[64];
    auto res = significant > 0
                   ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, significant)
                   : std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace qpm
