#pragma once

// Poling patterns and their closed-form phase-matching function (PMF) and
// propagating field amplitude.
//
// Conventions:
//   phi(dk)  = int_0^L g(z) exp(i dk z) dz          (units of length)
//   A(z, dk) = -i int_0^z g(z') exp(i dk z') dz'
// where g(z) = +-1 is the normalised nonlinearity of the domain at z.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpm/numeric.hpp"

namespace qpm {

enum class Orientation : std::int8_t { down = -1, up = 1 };

inline int sign_of(Orientation o) { return static_cast<int>(o); }
inline Orientation flip(Orientation o) { return o == Orientation::up ? Orientation::down : Orientation::up; }

struct Domain {
    double width = 0.0;  // m
    Orientation orientation = Orientation::up;

    bool operator==(const Domain&) const = default;
};

/// Ordered list of domains starting at z = 0. Immutable once built.
class Grating {
public:
    Grating() = default;
    /// Throws ConfigError if any width is not strictly positive and finite.
    explicit Grating(std::vector<Domain> domains);

    /// Equal-width grating with the given orientations.
    static Grating uniform(std::span<const Orientation> orientations, double width);

    [[nodiscard]] std::span<const Domain> domains() const noexcept { return domains_; }
    [[nodiscard]] std::size_t size() const noexcept { return domains_.size(); }
    [[nodiscard]] bool empty() const noexcept { return domains_.empty(); }
    [[nodiscard]] const Domain& operator[](std::size_t i) const { return domains_[i]; }

    /// Sum of widths, recomputed on every call.
    [[nodiscard]] double length() const;
    /// N + 1 accumulated boundary positions, starting at 0.
    [[nodiscard]] std::vector<double> boundaries() const;
    [[nodiscard]] std::vector<Orientation> orientations() const;

    /// Adjacent domains of equal orientation fused into single blocks.
    [[nodiscard]] Grating merged() const;
    [[nodiscard]] Grating reversed() const;
    /// All orientations inverted.
    [[nodiscard]] Grating flipped() const;
    [[nodiscard]] Grating concatenated(const Grating& tail) const;
    /// Domains [first, first + count), shifted to start at the origin.
    [[nodiscard]] Grating slice(std::size_t first, std::size_t count) const;

    bool operator==(const Grating&) const = default;

private:
    std::vector<Domain> domains_;
};

/// Closed-form PMF summed domain by domain. Each domain contributes
/// s_n w_n exp(i dk c_n) sinc(dk w_n / 2) with c_n its centre, which equals
/// s_n (e^{i dk z_n} - e^{i dk z_{n-1}}) / (i dk) and reduces to s_n w_n at
/// dk = 0 without any division.
cplx pmf(const Grating& grating, double dk);

/// A(z, dk), including the partial domain containing z. Throws DomainError
/// for z outside [0, L].
cplx field_amplitude(const Grating& grating, double z, double dk);

/// A_m at the end of each of N equal domains of width w, evaluated at
/// dk = pi / l_c with the running sum
///   A_m = (l_c / pi) (e^{-i pi w / l_c} - 1) sum_{n<=m} s_n e^{i pi n w / l_c}.
std::vector<cplx> amplitude_at_domain_ends(std::span<const Orientation> orientations,
                                           double width, double coherence_length);

/// The grating followed by its mirror image (length doubles).
Grating symmetrize(const Grating& grating);

/// Pre-merged representation for repeated PMF evaluation (spectra,
/// annealing energies). Produces the same values as pmf() up to rounding.
class PmfEvaluator {
public:
    explicit PmfEvaluator(const Grating& grating);
    PmfEvaluator(std::span<const double> block_widths, std::span<const int> block_signs);

    [[nodiscard]] cplx operator()(double dk) const;
    [[nodiscard]] double length() const noexcept { return length_; }

private:
    std::vector<double> centres_;
    std::vector<double> half_widths_;
    std::vector<double> weights_;  // s_n * w_n
    double length_ = 0.0;
};

/// Tabulated PMF on a strictly increasing dk grid.
struct PmfGrid {
    std::vector<double> dk;  // rad/m
    std::vector<cplx> values;  // m
    std::string source;
    double dk0 = 0.0;

    /// Throws ConfigError unless sizes match, count >= 2 and dk increases.
    void validate() const;
    /// Linear interpolation of the complex values; zero outside the grid.
    [[nodiscard]] cplx interpolate(double k) const;
};

PmfGrid sample_pmf(const Grating& grating, std::span<const double> dk, std::string source = "grating");

/// Uniform grid of `count` samples covering [centre - half_span, centre + half_span].
std::vector<double> uniform_grid(double centre, double half_span, std::size_t count);

}  // namespace qpm
