// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance             run every criterion
//   acceptance --only N    run criterion N; exit status reflects it alone

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qpm/algorithms.hpp"
#include "qpm/anneal.hpp"
#include "qpm/pipeline.hpp"
#include "qpm/poling_io.hpp"
#include "qpm/spectrum.hpp"
#include "qpm/target.hpp"
#include "surrogate.hpp"

using namespace qpm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 5) { return format_number(v, digits); }

const DispersionModel& ktp() {
    static const DispersionModel model = DispersionModel::from_file(QPM_TEST_DATA_DIR "/ktp_sellmeier.json");
    return model;
}
const ProcessSpec kSpec = ProcessSpec::ktp_type2_degenerate();
double lc() { return coherence_length(ktp(), kSpec); }

// The 2 mm crystal: smallest even domain count with N l_c >= 2 mm.
std::size_t two_mm_domains() {
    auto n = static_cast<std::size_t>(std::ceil(2e-3 / lc()));
    return n % 2 == 0 ? n : n + 1;
}

DesignParams params(Algorithm a, double sigma_ratio = 0.25) {
    DesignParams p;
    p.algorithm = a;
    p.sigma_ratio = sigma_ratio;
    return p;
}

double purity_of(const Grating& g, std::size_t points = 100, double window = 8.0) {
    PurityConfig pc;
    pc.grid.points = points;
    pc.grid.window_factor = window;
    return evaluate_purity(PhaseMatching::from_grating(g), ktp(), kSpec, pc).purity;
}

double purity_for(Algorithm a, std::size_t domains, double sigma_ratio = 0.25) {
    return purity_of(design_for_length(params(a, sigma_ratio), domains, lc()).grating);
}

Outcome within(double value, double centre, double tol) {
    return {std::abs(value - centre) <= tol,
            "purity=" + fmt(value) + " expected " + fmt(centre, 4) + " +- " + fmt(tol, 3)};
}

Outcome criterion_1() { return within(purity_for(Algorithm::periodic, two_mm_domains()), 0.854, 0.010); }

Outcome criterion_2() { return within(purity_for(Algorithm::tambasco_blocks, two_mm_domains()), 0.973, 0.010); }

Outcome criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    const DesignReport r = design_for_length(params(Algorithm::annealed), two_mm_domains(), lc());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double p = purity_of(r.grating);
    return {p >= 0.985 && seconds < 1800.0,
            "lowest-energy of 5 restarts: purity=" + fmt(p) + " energy=" + fmt(*r.final_energy, 4) + " (seed " +
                std::to_string(r.rng_seed) + "), " + fmt(seconds, 3) + " s; need >= 0.985, target 0.990"};
}

Outcome criterion_4() { return within(purity_for(Algorithm::sub_coherence, two_mm_domains()), 0.994, 0.005); }

Outcome criterion_5() {
    const std::vector<std::size_t> lengths{100, 200, 400, 800};
    const auto rows = purity_vs_length(params(Algorithm::sub_coherence), lengths, ktp(), kSpec, {});
    std::string detail;
    bool all_high = true, nondecreasing = true;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        detail += std::to_string(rows[j].length_lc) + "lc=" + fmt(rows[j].purity) + " ";
        all_high = all_high && rows[j].status == "ok" && rows[j].purity >= 0.99;
        if (j > 0) nondecreasing = nondecreasing && rows[j].purity >= rows[j - 1].purity - 1e-3;
    }
    const double plateau = std::min(rows[2].purity, rows[3].purity);
    const bool flat = std::abs(rows[3].purity - rows[2].purity) < 1e-3;
    detail += "plateau(400,800)=" + fmt(plateau) + "; need plateau >= 0.993, all >= 0.99, nondecreasing within 0.1 pp";
    return {all_high && nondecreasing && flat && plateau >= 0.993, detail};
}

Outcome criterion_6() {
    const double p = purity_for(Algorithm::sub_coherence, 800, 0.2);
    return {p >= 0.997, "sigma=L/5 at 800lc purity=" + fmt(p) + "; need >= 0.997"};
}

Outcome criterion_7() {
    const std::vector<std::size_t> lengths{60, 80, 100, 120, 150, 200};
    const auto rows = purity_vs_length(params(Algorithm::tambasco_blocks), lengths, ktp(), kSpec, {});
    std::string detail;
    for (const auto& r : rows) detail += std::to_string(r.length_lc) + "lc=" + fmt(r.purity) + " ";
    const double p80 = rows[1].purity, p100 = rows[2].purity, p150 = rows[4].purity;
    return {p80 < p150 && p100 < p150, detail + "; need 80lc and 100lc below 150lc"};
}

Outcome criterion_8() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> count(2, 200);
    const double dk0 = kPi / lc();
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Grating g = oracle::random_grating(count(rng), lc(), rng);
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, g.size() - 1)(rng);
        const Grating a = g.slice(0, m), b = g.slice(m, g.size() - m);
        for (double dk : {0.0, 0.9 * dk0, dk0, 1.2 * dk0}) {
            const cplx whole = pmf(g, dk);
            const cplx sum = pmf(a, dk) + std::polar(1.0, dk * a.length()) * pmf(b, dk);
            worst = std::max(worst, std::abs(sum - whole) / std::abs(whole));
        }
    }
    return {worst <= 1e-10, "max relative deviation " + fmt(worst, 3) + " over 200 random splits; need <= 1e-10"};
}

Outcome criterion_9() {
    std::mt19937_64 rng(9);
    const double dk0 = kPi / lc();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Grating g = Grating::uniform(oracle::random_orientations(100, rng), lc());
        for (double z : g.boundaries()) worst = std::max(worst, std::abs(field_amplitude(g, z, dk0).imag()) / g.length());
    }
    return {worst <= 1e-12, "max |Im A| / L = " + fmt(worst, 3) + "; need <= 1e-12"};
}

Outcome criterion_10() {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> ratio(0.05, 1.0);
    const double dk0 = kPi / lc();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double w = ratio(rng) * lc();
        const auto o = oracle::random_orientations(120, rng);
        const Grating g = Grating::uniform(o, w);
        const auto fast = amplitude_at_domain_ends(o, w, lc());
        const auto z = g.boundaries();
        double scale = 0.0;
        for (const auto& v : fast) scale = std::max(scale, std::abs(v));
        for (std::size_t m = 0; m < o.size(); ++m) {
            worst = std::max(worst, std::abs(fast[m] - field_amplitude(g, z[m + 1], dk0)) / scale);
        }
    }
    return {worst <= 1e-12, "max deviation relative to max|A| " + fmt(worst, 3) + "; need <= 1e-12"};
}

Outcome criterion_11() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto m = oracle::random_matrix(50, 50, seed);
        worst = std::max(worst, std::abs(schmidt(m).purity - oracle::gram_purity(m)));
    }
    return {worst <= 1e-10, "max |P_svd - P_gram| = " + fmt(worst, 3) + " over 20 matrices; need <= 1e-10"};
}

Outcome criterion_12() {
    const auto s = oracle::gaussian_surrogate();
    PurityConfig matched;
    matched.fixed_bandwidth = s.matched_bandwidth;
    const double p_matched = evaluate_purity(s.pm, s.model, s.spec, matched).purity;
    const auto p_opt = optimize_pump_bandwidth(sample_pmf_matrix(s.pm, s.model, s.spec, {}));
    return {p_matched >= 1.0 - 1e-4 && p_opt.purity >= 1.0 - 1e-4,
            "matched 1-P=" + fmt(1.0 - p_matched, 3) + ", optimised 1-P=" + fmt(1.0 - p_opt.purity, 3) +
                " at bandwidth/matched=" + fmt(p_opt.bandwidth / s.matched_bandwidth, 6) + "; need 1-P <= 1e-4"};
}

Outcome criterion_13() {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ratio(0.15, 0.4), scale(0.4, 1.0);
    std::uniform_int_distribution<std::size_t> count(20, 150);
    const double quantum = 2.0 * lc() / kPi;
    int identical = 0, tie_explained = 0, unexplained = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = count(rng);
        const double L = static_cast<double>(n) * lc();
        const double sigma = ratio(rng) * L;
        const auto t = TargetAmplitude::gaussian_erf(L, sigma, scale(rng) * optimal_scale(sigma));
        const auto a = design_domain_by_domain(t, n, lc()).grating.orientations();
        const auto b = design_sub_coherence(t, lc(), n, lc(), {}).grating.orientations();
        std::size_t m = 0;
        while (m < n && a[m] == b[m]) ++m;
        if (m == n) {
            ++identical;
            continue;
        }
        // Documented tie: zero error at the step while the amplitude was increasing.
        const auto amp = amplitude_at_domain_ends(std::span(a).first(m), lc(), lc());
        const double current = m > 0 ? amp[m - 1].real() : 0.0;
        const double before = m > 1 ? amp[m - 2].real() : 0.0;
        const double e = t(std::min(static_cast<double>(m + 1) * lc(), L)).real() - current;
        if (std::abs(e) <= 1e-12 * quantum && current >= before) {
            ++tie_explained;
        } else {
            ++unexplained;
        }
    }
    return {unexplained == 0, std::to_string(identical) + " identical, " + std::to_string(tie_explained) +
                                  " differ only at documented ties, " + std::to_string(unexplained) + " unexplained"};
}

Outcome criterion_14() {
    const std::size_t n = two_mm_domains();
    const double L = static_cast<double>(n) * lc();
    const Grating seed = design_domain_by_domain(TargetAmplitude::gaussian_optimal(L), n, lc()).grating;
    AnnealConfig cfg;
    cfg.max_iterations = 20000;
    cfg.seed = 12345;
    const double dk0 = kPi / lc();
    const auto target = gaussian_target_pmf(L, L / 4, dk0, anneal_grid(cfg, dk0, L));
    const auto first = anneal_widths(seed, target, cfg);
    const auto second = anneal_widths(seed, target, cfg);
    const bool same = export_poling(first.grating, PolingFormat::csv_widths) ==
                          export_poling(second.grating, PolingFormat::csv_widths) &&
                      first.to_json().dump() == second.to_json().dump() &&
                      std::memcmp(&*first.final_energy, &*second.final_energy, sizeof(double)) == 0;
    const bool preserved = first.grating.size() == seed.size() && first.grating.orientations() == seed.orientations();
    return {same && preserved, std::string("byte-identical reruns: ") + (same ? "yes" : "no") +
                                   ", orientations and domain count preserved: " + (preserved ? "yes" : "no")};
}

Outcome criterion_15() {
    std::string detail;
    bool pass = true;
    for (auto a : {Algorithm::periodic, Algorithm::sub_coherence}) {
        const Grating g = design_for_length(params(a), two_mm_domains(), lc()).grating;
        const double base = purity_of(g, 100, 8.0);
        const double fine = purity_of(g, 200, 8.0);
        const double wide = purity_of(g, 100, 16.0);
        const double d_grid = 100.0 * std::abs(fine - base);
        const double d_window = 100.0 * std::abs(wide - base);
        pass = pass && d_grid < 0.2 && d_window < 0.3;
        detail += std::string(to_string(a)) + ": grid 100->200 " + fmt(d_grid, 3) + " pp, window 8->16 " +
                  fmt(d_window, 3) + " pp; ";
    }
    return {pass, detail + "need < 0.2 pp and < 0.3 pp"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    const std::vector<Criterion> criteria{
        {1, "periodic 2 mm purity", criterion_1},
        {2, "block design 2 mm purity", criterion_2},
        {3, "width-annealed 2 mm purity", criterion_3},
        {4, "sub-coherence w = l_c/10 2 mm purity", criterion_4},
        {5, "sub-coherence length sweep plateau", criterion_5},
        {6, "sigma = L/5 at 800 l_c", criterion_6},
        {7, "block method dip at 80 and 100 l_c", criterion_7},
        {8, "PMF additivity", criterion_8},
        {9, "Im A = 0 at boundaries", criterion_9},
        {10, "running-sum amplitude equals field amplitude", criterion_10},
        {11, "SVD purity equals Gram trace purity", criterion_11},
        {12, "separable Gaussian surrogate purity", criterion_12},
        {13, "sub-coherence at w = l_c equals domain-by-domain", criterion_13},
        {14, "annealer determinism and structure", criterion_14},
        {15, "grid and window stability", criterion_15},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
