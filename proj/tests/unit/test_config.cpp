#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "qpm/config.hpp"
#include "qpm/errors.hpp"

using namespace qpm;
using nlohmann::json;

namespace {
std::string field_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<no error>";
}
}  // namespace

TEST_SUITE("config") {

TEST_CASE("quantities need explicit units") {
    CHECK(parse_quantity("791 nm", "f", Unit::length) == doctest::Approx(791e-9));
    CHECK(parse_quantity("2mm", "f", Unit::length) == doctest::Approx(2e-3));
    CHECK(parse_quantity(" 1.5 um ", "f", Unit::length) == doctest::Approx(1.5e-6));
    CHECK(parse_quantity("0.002 m", "f", Unit::length) == doctest::Approx(2e-3));
    CHECK(parse_quantity("40 C", "f", Unit::temperature) == 40.0);
    CHECK(parse_quantity("1.4e13 rad/s", "f", Unit::angular_frequency) == 1.4e13);
    CHECK(field_of([] { (void)parse_quantity(2.0, "crystal.length", Unit::length); }) == "crystal.length");
    CHECK(field_of([] { (void)parse_quantity("2", "crystal.length", Unit::length); }) == "crystal.length");
    CHECK(field_of([] { (void)parse_quantity("2 furlongs", "x", Unit::length); }) == "x");
    CHECK(field_of([] { (void)parse_quantity("25 C", "x", Unit::length); }) == "x");
    CHECK(field_of([] { (void)parse_quantity("mm", "x", Unit::length); }) == "x");
}

TEST_CASE("defaults describe the degenerate KTP process") {
    const auto c = RunConfig::from_json(json::object());
    CHECK(c.process.pump_wavelength == doctest::Approx(791e-9));
    CHECK(c.design.algorithm == Algorithm::periodic);
    CHECK(c.purity.grid.points == 100);
    CHECK(c.purity.grid.window_factor == 8.0);
    CHECK_FALSE(c.purity.fixed_bandwidth.has_value());
    CHECK(std::filesystem::exists(c.dispersion_file));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("crystal length resolves to the smallest even domain count") {
    auto c = RunConfig::from_json(json{{"crystal", {{"length", "2 mm"}}}});
    CHECK(c.resolve_domains(oracle::coherence_length) == 88);
    c = RunConfig::from_json(json{{"crystal", {{"length", "2 mm"}, {"domains", 50}}}});
    CHECK(c.resolve_domains(oracle::coherence_length) == 50);
    c = RunConfig::from_json(json::object());
    CHECK_THROWS_AS((void)c.resolve_domains(oracle::coherence_length), ConfigError);
}

TEST_CASE("full config parses") {
    const json doc = json::parse(R"({
        "process": {"pump_wavelength": "791 nm", "signal_wavelength": "1582 nm", "idler_wavelength": "1582 nm",
                    "temperature": "30 C"},
        "crystal": {"length": "1 mm"},
        "design": {"algorithm": "annealed", "sigma_ratio": 0.2, "width_ratio": 0.5, "min_domain_width": "2 um",
                   "anneal": {"initial_temperature": 1.0, "restarts": 2, "per_iteration_cooling": true}},
        "spectrum": {"grid_points": 64, "window_factor": 10, "pump_bandwidth": "1e13 rad/s"},
        "sweep": {"lengths_lc": [100, 200]},
        "poling": {"format": "csv-widths"},
        "output": {"directory": "results"},
        "seed": 42
    })");
    const auto c = RunConfig::from_json(doc);
    CHECK(c.process.temperature_c == 30.0);
    CHECK(c.design.algorithm == Algorithm::annealed);
    CHECK(c.design.anneal.temperature_step == doctest::Approx(1e-5));
    CHECK(c.design.anneal.seed == 42);
    CHECK(c.design.anneal.per_iteration_cooling);
    CHECK(c.design.options.min_domain_width == doctest::Approx(2e-6));
    CHECK(*c.purity.fixed_bandwidth == 1e13);
    CHECK(c.sweep_lengths == std::vector<std::size_t>{100, 200});
    CHECK(c.poling_format == PolingFormat::csv_widths);
    CHECK(c.output_dir == "results");
    CHECK_NOTHROW(c.validate());
    CHECK(c.to_json() == RunConfig::from_json(doc).to_json());
}

TEST_CASE("invalid configs name the field") {
    CHECK(field_of([] { RunConfig::from_json(json{{"crystal", {{"length", 2}}}}); }) == "crystal.length");
    CHECK(field_of([] { RunConfig::from_json(json{{"crystl", json::object()}}); }) == "crystl");
    CHECK(field_of([] { RunConfig::from_json(json{{"design", {{"sigma", 0.2}}}}); }) == "design.sigma");
    CHECK(field_of([] { RunConfig::from_json(json{{"design", {{"algorithm", "magic"}}}}); }) == "design.algorithm");
    CHECK(field_of([] { RunConfig::from_json(json{{"poling", {{"format", "xml"}}}}); }) == "poling.format");
    CHECK(field_of([] { RunConfig::from_json(json{{"seed", -1}}); }) == "seed");
    CHECK(field_of([] { RunConfig::from_json(json{{"design", {{"sigma_ratio", 0.0}}}}).validate(); }) ==
          "design.sigma_ratio");
    CHECK(field_of([] { RunConfig::from_json(json{{"spectrum", {{"grid_points", 8}}}}).validate(); }) ==
          "spectrum.grid_points");
    CHECK(field_of([] {
              RunConfig::from_json(json{{"process", {{"idler_wavelength", "1500 nm"}}}}).validate();
          }) == "process.idler_wavelength");
    CHECK(field_of([] { RunConfig::from_json(json{{"dispersion", {{"file", "missing.json"}}}}).validate(); }) ==
          "dispersion.file");
}

TEST_CASE("data directory comes from the environment when set") {
    const auto dir = std::filesystem::temp_directory_path() / "qpm_config_data";
    std::filesystem::create_directories(dir);
    std::filesystem::copy_file(QPM_TEST_DATA_DIR "/ktp_sellmeier.json", dir / "custom.json",
                               std::filesystem::copy_options::overwrite_existing);
    ::setenv("QPMDESIGN_DATA_DIR", dir.c_str(), 1);
    CHECK(default_data_dir() == dir);
    const auto c = RunConfig::from_json(json{{"dispersion", {{"file", "custom.json"}}}});
    CHECK(c.dispersion_file == dir / "custom.json");
    ::unsetenv("QPMDESIGN_DATA_DIR");
    std::filesystem::remove_all(dir);
}

TEST_CASE("config files resolve paths relative to themselves") {
    const auto dir = std::filesystem::temp_directory_path() / "qpm_config_file";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "run.json") << R"({"poling": {"file": "p.csv"}, "crystal": {"domains": 10}})";
    const auto c = RunConfig::from_file(dir / "run.json");
    CHECK(*c.poling_file == dir / "p.csv");
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(field_of([&] { RunConfig::from_file(dir / "broken.json"); }) == "config");
    CHECK(field_of([&] { RunConfig::from_file(dir / "absent.json"); }) == "config");
    std::filesystem::remove_all(dir);
}

}
