#include "qpm/grating.hpp"

#include <algorithm>
#include <cmath>

#include "qpm/errors.hpp"

namespace qpm {

Grating::Grating(std::vector<Domain> domains) : domains_(std::move(domains)) {
    for (std::size_t i = 0; i < domains_.size(); ++i) {
        const auto& d = domains_[i];
        if (!(d.width > 0.0) || !std::isfinite(d.width)) {
            throw ConfigError("grating", "domain " + std::to_string(i) + " has non-positive width");
        }
        if (d.orientation != Orientation::up && d.orientation != Orientation::down) {
            throw ConfigError("grating", "domain " + std::to_string(i) + " has invalid orientation");
        }
    }
}

Grating Grating::uniform(std::span<const Orientation> orientations, double width) {
    std::vector<Domain> d;
    d.reserve(orientations.size());
    for (auto o : orientations) d.push_back({width, o});
    return Grating(std::move(d));
}

double Grating::length() const {
    double sum = 0.0;
    for (const auto& d : domains_) sum += d.width;
    return sum;
}

std::vector<double> Grating::boundaries() const {
    std::vector<double> z(domains_.size() + 1, 0.0);
    for (std::size_t i = 0; i < domains_.size(); ++i) z[i + 1] = z[i] + domains_[i].width;
    return z;
}

std::vector<Orientation> Grating::orientations() const {
    std::vector<Orientation> out;
    out.reserve(domains_.size());
    for (const auto& d : domains_) out.push_back(d.orientation);
    return out;
}

Grating Grating::merged() const {
    std::vector<Domain> out;
    for (const auto& d : domains_) {
        if (!out.empty() && out.back().orientation == d.orientation) {
            out.back().width += d.width;
        } else {
            out.push_back(d);
        }
    }
    return Grating(std::move(out));
}

Grating Grating::reversed() const {
    return Grating(std::vector<Domain>(domains_.rbegin(), domains_.rend()));
}

Grating Grating::flipped() const {
    auto out = domains_;
    for (auto& d : out) d.orientation = flip(d.orientation);
    return Grating(std::move(out));
}

Grating Grating::concatenated(const Grating& tail) const {
    auto out = domains_;
    out.insert(out.end(), tail.domains_.begin(), tail.domains_.end());
    return Grating(std::move(out));
}

Grating Grating::slice(std::size_t first, std::size_t count) const {
    if (first > domains_.size() || count > domains_.size() - first) {
        throw DomainError("grating slice out of range");
    }
    return Grating(std::vector<Domain>(domains_.begin() + static_cast<std::ptrdiff_t>(first),
                                       domains_.begin() + static_cast<std::ptrdiff_t>(first + count)));
}

namespace {

// Integral of s * exp(i dk z) over [start, start + width].
cplx domain_integral(double start, double width, int sign, double dk) {
    const double half = 0.5 * width;
    return static_cast<double>(sign) * width * sinc(dk * half) * std::polar(1.0, dk * (start + half));
}

}  // namespace

cplx pmf(const Grating& grating, double dk) {
    cplx sum{0.0, 0.0};
    double z = 0.0;
    for (const auto& d : grating.domains()) {
        sum += domain_integral(z, d.width, sign_of(d.orientation), dk);
        z += d.width;
    }
    return sum;
}

cplx field_amplitude(const Grating& grating, double z, double dk) {
    const double length = grating.length();
    if (!(z >= 0.0) || z > length * (1.0 + 1e-15)) {
        throw DomainError("z = " + format_number(z) + " m outside crystal [0, " + format_number(length) + "]");
    }
    cplx sum{0.0, 0.0};
    double start = 0.0;
    for (const auto& d : grating.domains()) {
        if (start >= z) break;
        const double w = std::min(d.width, z - start);
        sum += domain_integral(start, w, sign_of(d.orientation), dk);
        start += d.width;
    }
    return cplx{0.0, -1.0} * sum;
}

std::vector<cplx> amplitude_at_domain_ends(std::span<const Orientation> orientations, double width,
                                           double coherence_length) {
    const double phase_step = kPi * width / coherence_length;
    const cplx prefactor = (coherence_length / kPi) * (std::polar(1.0, -phase_step) - 1.0);
    std::vector<cplx> out;
    out.reserve(orientations.size());
    cplx running{0.0, 0.0};
    for (std::size_t n = 1; n <= orientations.size(); ++n) {
        running += static_cast<double>(sign_of(orientations[n - 1])) *
                   std::polar(1.0, phase_step * static_cast<double>(n));
        out.push_back(prefactor * running);
    }
    return out;
}

Grating symmetrize(const Grating& grating) { return grating.concatenated(grating.reversed()); }

PmfEvaluator::PmfEvaluator(const Grating& grating) {
    const Grating blocks = grating.merged();
    double z = 0.0;
    for (const auto& d : blocks.domains()) {
        centres_.push_back(z + 0.5 * d.width);
        half_widths_.push_back(0.5 * d.width);
        weights_.push_back(sign_of(d.orientation) * d.width);
        z += d.width;
    }
    length_ = z;
}

PmfEvaluator::PmfEvaluator(std::span<const double> block_widths, std::span<const int> block_signs) {
    double z = 0.0;
    for (std::size_t i = 0; i < block_widths.size(); ++i) {
        centres_.push_back(z + 0.5 * block_widths[i]);
        half_widths_.push_back(0.5 * block_widths[i]);
        weights_.push_back(block_signs[i] * block_widths[i]);
        z += block_widths[i];
    }
    length_ = z;
}

cplx PmfEvaluator::operator()(double dk) const {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < centres_.size(); ++n) {
        const double amp = weights_[n] * sinc(dk * half_widths_[n]);
        const double phase = dk * centres_[n];
        re += amp * std::cos(phase);
        im += amp * std::sin(phase);
    }
    return {re, im};
}

void PmfGrid::validate() const {
    if (dk.size() != values.size()) throw ConfigError("pmf_grid", "dk and value counts differ");
    if (dk.size() < 2) throw ConfigError("pmf_grid", "need at least two samples");
    for (std::size_t i = 1; i < dk.size(); ++i) {
        if (!(dk[i] > dk[i - 1])) throw ConfigError("pmf_grid", "dk samples must be strictly increasing");
    }
}

cplx PmfGrid::interpolate(double k) const {
    if (dk.empty() || k < dk.front() || k > dk.back()) return {0.0, 0.0};
    auto it = std::upper_bound(dk.begin(), dk.end(), k);
    if (it == dk.end()) return values.back();
    const auto hi = static_cast<std::size_t>(it - dk.begin());
    const std::size_t lo = hi - 1;
    const double t = (k - dk[lo]) / (dk[hi] - dk[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
}

PmfGrid sample_pmf(const Grating& grating, std::span<const double> dk, std::string source) {
    PmfEvaluator eval(grating);
    PmfGrid grid;
    grid.dk.assign(dk.begin(), dk.end());
    grid.values.reserve(dk.size());
    for (double k : dk) grid.values.push_back(eval(k));
    grid.source = std::move(source);
    grid.validate();
    return grid;
}

std::vector<double> uniform_grid(double centre, double half_span, std::size_t count) {
    if (count < 2) throw ConfigError("grid", "grid needs at least two samples");
    std::vector<double> out(count);
    const double step = 2.0 * half_span / static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j) out[j] = centre - half_span + step * static_cast<double>(j);
    return out;
}

}  // namespace qpm
