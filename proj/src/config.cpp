#include "qpm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "qpm/errors.hpp"

#ifndef QPM_DEFAULT_DATA_DIR
#define QPM_DEFAULT_DATA_DIR "data"
#endif

namespace qpm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UnitEntry {
    std::string_view suffix;
    Unit unit;
    double factor;
};

constexpr UnitEntry kUnits[] = {
    {"nm", Unit::length, 1e-9},        {"um", Unit::length, 1e-6},
    {"mm", Unit::length, 1e-3},        {"m", Unit::length, 1.0},
    {"C", Unit::temperature, 1.0},     {"rad/s", Unit::angular_frequency, 1.0},
};

std::string_view unit_name(Unit unit) {
    switch (unit) {
        case Unit::length: return "a length (nm, um, mm, m)";
        case Unit::temperature: return "a temperature (C)";
        case Unit::angular_frequency: return "an angular frequency (rad/s)";
    }
    return "a quantity";
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void reject_unknown(const json& node, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!node.is_object()) throw ConfigError(std::string(where), "expected an object");
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (auto k : keys) known = known || key == k;
        if (!known) {
            const std::string field = where.empty() ? key : std::string(where) + "." + key;
            throw ConfigError(field, "unknown key");
        }
    }
}

template <typename T>
T get(const json& node, std::string_view key, std::string_view where, T fallback) {
    if (!node.contains(key)) return fallback;
    try {
        return node.at(std::string(key)).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + "." + std::string(key), "wrong value type");
    }
}

bool is_count(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t get_count(const json& node, std::string_view key, std::string_view where, std::size_t fallback) {
    if (!node.contains(key)) return fallback;
    const auto& v = node.at(std::string(key));
    if (!is_count(v)) {
        throw ConfigError(std::string(where) + "." + std::string(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

fs::path resolve_input(const fs::path& name, const fs::path& base_dir, bool search_data_dir) {
    if (name.is_absolute()) return name;
    const fs::path local = base_dir.empty() ? name : base_dir / name;
    if (fs::exists(local) || !search_data_dir) return local;
    const fs::path data = default_data_dir() / name;
    return fs::exists(data) ? data : local;
}

}  // namespace

double parse_quantity(const json& value, std::string_view field, Unit unit) {
    if (!value.is_string()) {
        throw ConfigError(std::string(field), "expected " + std::string(unit_name(unit)) +
                                                  " with an explicit unit, e.g. \"2 mm\"; unitless values are rejected");
    }
    const auto text = value.get<std::string>();
    std::string_view s = trim(text);
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
    if (ec != std::errc() || !std::isfinite(number)) {
        throw ConfigError(std::string(field), "cannot parse a number from '" + text + "'");
    }
    const std::string_view suffix = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
    if (suffix.empty()) throw ConfigError(std::string(field), "missing unit in '" + text + "'");
    for (const auto& u : kUnits) {
        if (u.suffix == suffix) {
            if (u.unit != unit) {
                throw ConfigError(std::string(field), "expected " + std::string(unit_name(unit)) + ", got '" + text + "'");
            }
            return number * u.factor;
        }
    }
    throw ConfigError(std::string(field), "unknown unit '" + std::string(suffix) + "'");
}

fs::path default_data_dir() {
    if (const char* env = std::getenv("QPMDESIGN_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return QPM_DEFAULT_DATA_DIR;
}

RunConfig RunConfig::from_json(const json& doc, const fs::path& base_dir) {
    reject_unknown(doc, "", {"dispersion", "process", "crystal", "design", "spectrum", "sweep", "poling", "output",
                             "seed", "parallel"});
    RunConfig c;
    const json empty = json::object();

    const json& disp = doc.contains("dispersion") ? doc["dispersion"] : empty;
    reject_unknown(disp, "dispersion", {"file"});
    c.dispersion_file = resolve_input(get<std::string>(disp, "file", "dispersion", "ktp_sellmeier.json"), base_dir, true);

    const json& proc = doc.contains("process") ? doc["process"] : empty;
    reject_unknown(proc, "process", {"pump_wavelength", "signal_wavelength", "idler_wavelength", "pump_axis",
                                     "signal_axis", "idler_axis", "temperature"});
    if (proc.contains("pump_wavelength")) {
        c.process.pump_wavelength = parse_quantity(proc["pump_wavelength"], "process.pump_wavelength", Unit::length);
    }
    if (proc.contains("signal_wavelength")) {
        c.process.signal_wavelength = parse_quantity(proc["signal_wavelength"], "process.signal_wavelength", Unit::length);
    }
    if (proc.contains("idler_wavelength")) {
        c.process.idler_wavelength = parse_quantity(proc["idler_wavelength"], "process.idler_wavelength", Unit::length);
    }
    c.process.pump_axis = get<std::string>(proc, "pump_axis", "process", c.process.pump_axis);
    c.process.signal_axis = get<std::string>(proc, "signal_axis", "process", c.process.signal_axis);
    c.process.idler_axis = get<std::string>(proc, "idler_axis", "process", c.process.idler_axis);
    if (proc.contains("temperature")) {
        c.process.temperature_c = parse_quantity(proc["temperature"], "process.temperature", Unit::temperature);
    }

    const json& crystal = doc.contains("crystal") ? doc["crystal"] : empty;
    reject_unknown(crystal, "crystal", {"length", "domains"});
    if (crystal.contains("length")) c.crystal_length = parse_quantity(crystal["length"], "crystal.length", Unit::length);
    if (crystal.contains("domains")) c.domains = get_count(crystal, "domains", "crystal", 0);

    const json& design = doc.contains("design") ? doc["design"] : empty;
    reject_unknown(design, "design", {"algorithm", "sigma_ratio", "width_ratio", "min_domain_width", "anneal"});
    c.design.algorithm = parse_algorithm(get<std::string>(design, "algorithm", "design", "periodic"));
    c.design.sigma_ratio = get<double>(design, "sigma_ratio", "design", c.design.sigma_ratio);
    c.design.width_ratio = get<double>(design, "width_ratio", "design", c.design.width_ratio);
    if (design.contains("min_domain_width")) {
        c.design.options.min_domain_width =
            parse_quantity(design["min_domain_width"], "design.min_domain_width", Unit::length);
    }
    const json& anneal = design.contains("anneal") ? design["anneal"] : empty;
    reject_unknown(anneal, "design.anneal",
                   {"initial_temperature", "temperature_step", "energy_threshold", "max_perturbation", "grid_samples",
                    "grid_half_span_factor", "max_iterations", "restarts", "per_iteration_cooling",
                    "metropolis_delta", "record_trace"});
    auto& a = c.design.anneal;
    const std::string aw = "design.anneal";
    a.initial_temperature = get<double>(anneal, "initial_temperature", aw, a.initial_temperature);
    a.temperature_step = get<double>(anneal, "temperature_step", aw, a.initial_temperature / 1e5);
    a.energy_threshold = get<double>(anneal, "energy_threshold", aw, a.energy_threshold);
    a.max_perturbation = get<double>(anneal, "max_perturbation", aw, a.max_perturbation);
    a.grid_samples = get_count(anneal, "grid_samples", aw, a.grid_samples);
    a.grid_half_span_factor = get<double>(anneal, "grid_half_span_factor", aw, a.grid_half_span_factor);
    a.max_iterations = get_count(anneal, "max_iterations", aw, a.max_iterations);
    a.restarts = get_count(anneal, "restarts", aw, a.restarts);
    a.per_iteration_cooling = get<bool>(anneal, "per_iteration_cooling", aw, a.per_iteration_cooling);
    a.metropolis_delta = get<bool>(anneal, "metropolis_delta", aw, a.metropolis_delta);
    a.record_trace = get<bool>(anneal, "record_trace", aw, a.record_trace);

    const json& spectrum = doc.contains("spectrum") ? doc["spectrum"] : empty;
    reject_unknown(spectrum, "spectrum", {"grid_points", "window_factor", "pump_bandwidth", "scan_points"});
    c.purity.grid.points = get_count(spectrum, "grid_points", "spectrum", c.purity.grid.points);
    c.purity.grid.window_factor = get<double>(spectrum, "window_factor", "spectrum", c.purity.grid.window_factor);
    c.pmf_scan_points = get_count(spectrum, "scan_points", "spectrum", c.pmf_scan_points);
    if (spectrum.contains("pump_bandwidth") && spectrum["pump_bandwidth"] != "auto") {
        c.purity.fixed_bandwidth =
            parse_quantity(spectrum["pump_bandwidth"], "spectrum.pump_bandwidth", Unit::angular_frequency);
    }

    const json& sweep = doc.contains("sweep") ? doc["sweep"] : empty;
    reject_unknown(sweep, "sweep", {"lengths_lc"});
    if (sweep.contains("lengths_lc")) {
        if (!sweep["lengths_lc"].is_array()) throw ConfigError("sweep.lengths_lc", "expected an array of integers");
        for (const auto& v : sweep["lengths_lc"]) {
            if (!is_count(v)) throw ConfigError("sweep.lengths_lc", "expected an array of integers");
            c.sweep_lengths.push_back(v.get<std::size_t>());
        }
    }

    const json& poling = doc.contains("poling") ? doc["poling"] : empty;
    reject_unknown(poling, "poling", {"file", "format"});
    if (poling.contains("file")) {
        c.poling_file = resolve_input(get<std::string>(poling, "file", "poling", ""), base_dir, false);
    }
    try {
        c.poling_format = parse_poling_format(get<std::string>(poling, "format", "poling", "csv-boundaries"));
    } catch (const ConfigError& e) {
        throw ConfigError("poling.format", e.what());
    }

    const json& output = doc.contains("output") ? doc["output"] : empty;
    reject_unknown(output, "output", {"directory"});
    c.output_dir = get<std::string>(output, "directory", "output", "out");

    if (doc.contains("seed")) {
        if (!is_count(doc["seed"])) throw ConfigError("seed", "expected a non-negative integer");
        c.seed = doc["seed"].get<std::uint64_t>();
    }
    c.parallel = get_count(doc, "parallel", "", c.parallel);
    c.design.anneal.seed = c.seed;
    return c;
}

RunConfig RunConfig::from_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return from_json(doc, path.parent_path());
}

void RunConfig::validate() const {
    if (!fs::exists(dispersion_file)) {
        throw ConfigError("dispersion.file", "dispersion data file '" + dispersion_file.string() + "' not found");
    }
    process.validate();
    if (crystal_length && !(*crystal_length > 0.0)) throw ConfigError("crystal.length", "length must be positive");
    if (domains && *domains == 0) throw ConfigError("crystal.domains", "need at least one domain");
    design.validate();
    if (purity.grid.points < 32) throw ConfigError("spectrum.grid_points", "grid needs at least 32 points per axis");
    if (!(purity.grid.window_factor > 0.0)) throw ConfigError("spectrum.window_factor", "must be positive");
    if (purity.fixed_bandwidth && !(*purity.fixed_bandwidth > 0.0)) {
        throw ConfigError("spectrum.pump_bandwidth", "bandwidth must be positive");
    }
    if (pmf_scan_points < 2) throw ConfigError("spectrum.scan_points", "need at least two scan points");
    if (parallel == 0) throw ConfigError("parallel", "need at least one worker");
}

DispersionModel RunConfig::load_model() const {
    try {
        return DispersionModel::from_file(dispersion_file);
    } catch (const ConfigError& e) {
        throw ConfigError("dispersion." + e.field(), e.what());
    }
}

std::size_t RunConfig::resolve_domains(double coherence_length) const {
    if (domains) return *domains;
    if (!crystal_length) throw ConfigError("crystal", "give either crystal.length or crystal.domains");
    auto n = static_cast<std::size_t>(std::ceil(*crystal_length / coherence_length - 1e-9));
    if (n % 2 != 0) ++n;
    return std::max<std::size_t>(n, 2);
}

json RunConfig::to_json() const {
    json j;
    j["dispersion"] = {{"file", dispersion_file.string()}};
    j["process"] = process.describe();
    if (crystal_length) j["crystal"]["length_m"] = *crystal_length;
    if (domains) j["crystal"]["domains"] = *domains;
    j["design"] = {{"algorithm", to_string(design.algorithm)},
                   {"sigma_ratio", design.sigma_ratio},
                   {"width_ratio", design.width_ratio},
                   {"min_domain_width_m", design.options.min_domain_width},
                   {"anneal", design.anneal.to_json()}};
    j["spectrum"] = {{"grid_points", purity.grid.points},
                     {"window_factor", purity.grid.window_factor},
                     {"scan_points", pmf_scan_points}};
    j["spectrum"]["pump_bandwidth_rad_s"] = purity.fixed_bandwidth ? json(*purity.fixed_bandwidth) : json("auto");
    if (!sweep_lengths.empty()) j["sweep"] = {{"lengths_lc", sweep_lengths}};
    if (poling_file) j["poling"]["file"] = poling_file->string();
    j["poling"]["format"] = to_string(poling_format);
    j["seed"] = seed;
    return j;
}

}  // namespace qpm
