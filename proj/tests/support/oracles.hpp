#pragma once

// Reference computations that share no code with the library: brute-force
// quadrature, a Gram-matrix purity, and small random generators. Frozen
// scalar values were computed separately in double precision from the data
// file coefficients.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qpm/grating.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// KTP, 791 nm (y) -> 1582 nm (y) + 1582 nm (z), 25 C.
inline constexpr double n_z_791 = 1.84594996521708;
inline constexpr double n_y_791 = 1.7572323188877277;
inline constexpr double n_y_1582_50c = 1.7336829804856622;
inline constexpr double delta_k0 = -136159.46493557468;  // rad/m
inline constexpr double coherence_length = 2.3072892178860072e-05;  // m
inline constexpr double k1_pump = 6.0308651e-9;    // s/m
inline constexpr double k1_signal = 5.8833403e-9;  // s/m
inline constexpr double k1_idler = 6.1782901e-9;   // s/m
inline constexpr double pmf_angle_deg = 45.0194;
// Half maximum of sinc^2: sinc(x)^2 = 1/2 at x = 1.39155737825151.
inline constexpr double sinc2_half_max_x = 1.39155737825151;

/// Composite Simpson integral of g(z) exp(i dk z) over the grating with
/// `per_domain` panels per domain.
inline cplx quadrature_pmf(const qpm::Grating& g, double dk, int per_domain = 64) {
    cplx total{0.0, 0.0};
    double z0 = 0.0;
    for (const auto& d : g.domains()) {
        const double h = d.width / per_domain;
        cplx s{0.0, 0.0};
        for (int j = 0; j <= per_domain; ++j) {
            const double weight = (j == 0 || j == per_domain) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            s += weight * std::polar(1.0, dk * (z0 + j * h));
        }
        total += static_cast<double>(qpm::sign_of(d.orientation)) * s * h / 3.0;
        z0 += d.width;
    }
    return total;
}

/// Tr(rho^2) with rho = M M^H / Tr(M M^H).
inline double gram_purity(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd gram = m * m.adjoint();
    const double trace = gram.trace().real();
    return gram.cwiseAbs2().sum() / (trace * trace);
}

inline Eigen::MatrixXcd random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = cplx{n(rng), n(rng)};
    }
    return m;
}

inline std::vector<qpm::Orientation> random_orientations(std::size_t count, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(0.5);
    std::vector<qpm::Orientation> o(count);
    for (auto& x : o) x = coin(rng) ? qpm::Orientation::up : qpm::Orientation::down;
    return o;
}

inline qpm::Grating random_grating(std::size_t count, double mean_width, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(0.2 * mean_width, 1.8 * mean_width);
    std::vector<qpm::Domain> d;
    for (auto o : random_orientations(count, rng)) d.push_back({w(rng), o});
    return qpm::Grating(std::move(d));
}

/// Field amplitude -i int_0^z g exp(i dk z') dz' by brute-force quadrature.
inline cplx quadrature_amplitude(const qpm::Grating& g, double z, double dk, int per_domain = 64) {
    std::vector<qpm::Domain> head;
    double z0 = 0.0;
    for (const auto& d : g.domains()) {
        if (z0 >= z) break;
        head.push_back({std::min(d.width, z - z0), d.orientation});
        z0 += d.width;
    }
    if (head.empty()) return {0.0, 0.0};
    return cplx{0.0, -1.0} * quadrature_pmf(qpm::Grating(std::move(head)), dk, per_domain);
}

}  // namespace oracle
