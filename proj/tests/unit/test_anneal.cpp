#include <doctest.h>

#include "oracles.hpp"
#include "qpm/algorithms.hpp"
#include "qpm/anneal.hpp"
#include "qpm/errors.hpp"
#include "qpm/target.hpp"

using namespace qpm;

namespace {
constexpr double lc = oracle::coherence_length;
constexpr double dk0 = oracle::pi / lc;

struct Case {
    Grating seed;
    PmfGrid target;
    AnnealConfig config;
};

Case small_case(std::size_t n = 40) {
    const double L = n * lc;
    Case c;
    c.seed = design_domain_by_domain(TargetAmplitude::gaussian_optimal(L), n, lc).grating;
    c.config.max_iterations = 3000;
    c.config.restarts = 3;
    c.target = gaussian_target_pmf(L, L / 4, dk0, anneal_grid(c.config, dk0, L));
    return c;
}

// Energy straight from the definition, using the per-domain PMF.
double reference_energy(const Grating& g, const PmfGrid& t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < t.dk.size(); ++j) {
        const double d = std::abs(t.values[j]) - std::abs(pmf(g, t.dk[j]));
        sum += d * d;
    }
    return std::sqrt(sum) / (2.0 * g.length() / oracle::pi);
}
}  // namespace

TEST_SUITE("anneal") {

TEST_CASE("energy matches the definition") {
    const auto c = small_case();
    CHECK(pmf_energy(c.seed, c.target, 2.0 * c.seed.length() / oracle::pi) ==
          doctest::Approx(reference_energy(c.seed, c.target)).epsilon(1e-9));
    PmfGrid irregular = c.target;
    irregular.dk[1] += 0.3 * (irregular.dk[2] - irregular.dk[1]);
    CHECK(pmf_energy(c.seed, irregular, 2.0 * c.seed.length() / oracle::pi) ==
          doctest::Approx(reference_energy(c.seed, irregular)).epsilon(1e-9));
}

TEST_CASE("a target equal to the seed's own PMF is a fixed point") {
    auto c = small_case();
    const auto own = sample_pmf(c.seed, c.target.dk);
    const auto r = anneal_widths(c.seed, own, c.config);
    CHECK(r.iterations == 0);
    CHECK(*r.final_energy < c.config.energy_threshold);
    CHECK(r.grating == c.seed);
}

TEST_CASE("fixed seed gives identical reports; orientations and count never change") {
    auto c = small_case();
    const auto a = anneal_widths(c.seed, c.target, c.config);
    const auto b = anneal_widths(c.seed, c.target, c.config);
    CHECK(a.grating == b.grating);
    CHECK(*a.final_energy == *b.final_energy);
    CHECK(a.iterations == b.iterations);
    CHECK(a.grating.size() == c.seed.size());
    CHECK(a.grating.orientations() == c.seed.orientations());
    CHECK(*a.final_energy <= *a.initial_energy);
    CHECK(pmf_energy(a.grating, c.target, 2.0 * c.seed.length() / oracle::pi) ==
          doctest::Approx(*a.final_energy).epsilon(1e-9));
    c.config.seed = 2;
    CHECK_FALSE(anneal_widths(c.seed, c.target, c.config).grating == a.grating);
}

TEST_CASE("annealing lowers the energy of a domain-by-domain seed") {
    auto c = small_case();
    const auto r = anneal_widths(c.seed, c.target, c.config);
    CHECK(*r.final_energy < *r.initial_energy);
    for (const auto& d : r.grating.domains()) CHECK(d.width > 0.0);
}

TEST_CASE("restarts are independent of the worker count") {
    auto c = small_case(30);
    const auto serial = anneal_restarts(c.seed, c.target, c.config, 1);
    const auto threaded = anneal_restarts(c.seed, c.target, c.config, 3);
    REQUIRE(serial.size() == 3);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].grating == threaded[i].grating);
        CHECK(serial[i].rng_seed == c.config.seed + i);
    }
    const auto best = best_by_energy(serial);
    for (const auto& r : serial) CHECK(*serial[best].final_energy <= *r.final_energy);
}

TEST_CASE("schedule variants and trace recording") {
    auto c = small_case(30);
    c.config.record_trace = true;
    c.config.max_iterations = 500;
    const auto literal = anneal_widths(c.seed, c.target, c.config);
    CHECK(literal.trace.size() == literal.iterations);
    for (std::size_t i = 1; i < literal.trace.size(); ++i) {
        CHECK(literal.trace[i].temperature <= literal.trace[i - 1].temperature);
        if (literal.trace[i].accepted) CHECK(literal.trace[i].temperature == literal.trace[i - 1].temperature);
    }
    c.config.per_iteration_cooling = true;
    const auto cooled = anneal_widths(c.seed, c.target, c.config);
    CHECK(cooled.trace.back().temperature ==
          doctest::Approx(c.config.initial_temperature - 500 * c.config.temperature_step));
    c.config.metropolis_delta = true;
    CHECK(anneal_widths(c.seed, c.target, c.config).grating.orientations() == c.seed.orientations());
}

TEST_CASE("temperature exhaustion stops the run") {
    auto c = small_case(20);
    c.config.initial_temperature = 1.0;
    c.config.temperature_step = 0.125;
    c.config.per_iteration_cooling = true;
    const auto r = anneal_widths(c.seed, c.target, c.config);
    CHECK(r.iterations == 8);
}

TEST_CASE("invalid configurations are rejected with the field name") {
    const auto c = small_case(20);
    auto expect_field = [&](AnnealConfig cfg, const std::string& field) {
        try {
            anneal_widths(c.seed, c.target, cfg);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.field() == field);
        }
    };
    AnnealConfig cfg;
    cfg.initial_temperature = 0.0;
    expect_field(cfg, "anneal.initial_temperature");
    cfg = {};
    cfg.temperature_step = 0.2;
    expect_field(cfg, "anneal.temperature_step");
    cfg = {};
    cfg.max_perturbation = 0.1;
    expect_field(cfg, "anneal.max_perturbation");
    cfg = {};
    cfg.grid_samples = 8;
    expect_field(cfg, "anneal.grid_samples");
    CHECK_THROWS_AS(anneal_widths(Grating{}, c.target, AnnealConfig{}), ConfigError);
}

}
