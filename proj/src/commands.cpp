#include "qpm/commands.hpp"

#include <exception>
#include <functional>
#include <ostream>
#include <vector>

#include <CLI11.hpp>

#include "qpm/errors.hpp"
#include "qpm/target.hpp"

#ifndef QPM_VERSION
#define QPM_VERSION "0.0.0"
#endif

namespace qpm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

void report_error(std::ostream& err, std::string_view kind, std::string_view field, std::string_view message) {
    err << "error kind=" << kind << " field=" << (field.empty() ? "-" : field) << " message=" << quote(message)
        << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        report_error(err, "config", e.field(), e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        report_error(err, "runtime", "", e.what());
        return kExitRuntime;
    }
}

std::vector<std::string> provenance(const RunConfig& config, std::initializer_list<std::string> extra = {}) {
    std::vector<std::string> lines{"qpmdesign " + tool_version(), "config " + config.to_json().dump()};
    lines.insert(lines.end(), extra);
    return lines;
}

std::string with_comments(const std::vector<std::string>& comment, const std::string& body) {
    std::string out;
    for (const auto& line : comment) out += "# " + line + "\n";
    return out + body;
}

struct Context {
    DispersionModel model;
    double lc = 0.0;
    double dk0 = 0.0;  // sign-normalised carrier, pi / l_c
};

Context load_context(const RunConfig& config) {
    config.validate();
    Context ctx{config.load_model(), 0.0, 0.0};
    ctx.lc = coherence_length(ctx.model, config.process);
    ctx.dk0 = kPi / ctx.lc;
    return ctx;
}

Grating load_or_design(const RunConfig& config, const Context& ctx, std::string& origin) {
    if (config.poling_file) {
        if (!fs::exists(*config.poling_file)) {
            throw ConfigError("poling.file", "poling file '" + config.poling_file->string() + "' not found");
        }
        origin = "poling file " + config.poling_file->filename().string();
        return read_poling_file(*config.poling_file);
    }
    const std::size_t n = config.resolve_domains(ctx.lc);
    origin = std::string(to_string(config.design.algorithm)) + " design, " + std::to_string(n) + " l_c";
    return design_for_length(config.design, n, ctx.lc, config.parallel).grating;
}

// A(z) at the design mismatch at every domain boundary, next to the target.
std::string amplitude_trace_csv(const Grating& g, const TargetAmplitude& target, double dk0) {
    std::string out = "z_m,re_amplitude_m,im_amplitude_m,abs_amplitude_m,re_target_m,im_target_m\n";
    cplx running{0.0, 0.0};
    double z = 0.0;
    auto row = [&](double zz) {
        const cplx a = cplx{0.0, -1.0} * running;
        const cplx t = target(std::min(zz, target.length()));
        out += format_number(zz, 12) + "," + format_number(a.real()) + "," + format_number(a.imag()) + "," +
               format_number(std::abs(a)) + "," + format_number(t.real()) + "," + format_number(t.imag()) + "\n";
    };
    row(0.0);
    for (const auto& d : g.domains()) {
        running += static_cast<double>(sign_of(d.orientation)) * d.width * sinc(0.5 * dk0 * d.width) *
                   std::polar(1.0, dk0 * (z + 0.5 * d.width));
        z += d.width;
        row(z);
    }
    return out;
}

std::string pmf_scan_csv(const Grating& g, double dk0, std::size_t points) {
    const PmfEvaluator eval(g);
    std::string out = "dk_rad_m,offset_rad_m,re_pmf_m,im_pmf_m,abs_pmf_m\n";
    for (double k : uniform_grid(dk0, 16.0 * kPi / g.length(), points)) {
        const cplx v = eval(k);
        out += format_number(k) + "," + format_number(k - dk0) + "," + format_number(v.real()) + "," +
               format_number(v.imag()) + "," + format_number(std::abs(v)) + "\n";
    }
    return out;
}

std::string anneal_trace_csv(const std::vector<AnnealTraceRow>& rows) {
    std::string out = "iteration,temperature,energy,accepted\n";
    for (const auto& r : rows) {
        out += std::to_string(r.iteration) + "," + format_number(r.temperature) + "," + format_number(r.energy) + "," +
               (r.accepted ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace

std::string tool_version() { return QPM_VERSION; }

RunConfig resolve_config(const Overrides& o) {
    RunConfig c = o.config ? RunConfig::from_file(*o.config) : RunConfig::from_json(json::object());
    if (o.seed) {
        c.seed = *o.seed;
        c.design.anneal.seed = *o.seed;
    }
    if (o.out) c.output_dir = *o.out;
    if (o.parallel) c.parallel = *o.parallel;
    if (o.poling) c.poling_file = *o.poling;
    if (o.format) {
        try {
            c.poling_format = parse_poling_format(*o.format);
        } catch (const ConfigError& e) {
            throw ConfigError("format", e.what());
        }
    }
    return c;
}

int cmd_design(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Context ctx = load_context(config);
        const std::size_t n = config.resolve_domains(ctx.lc);
        const DesignReport report = design_for_length(config.design, n, ctx.lc, config.parallel);
        const Grating& g = report.grating;
        const auto target = TargetAmplitude::gaussian_optimal(static_cast<double>(n) * ctx.lc, config.design.sigma_ratio);
        const auto comment = provenance(config, {"coherence_length_m " + format_number(ctx.lc)});

        json meta;
        meta["tool"] = "qpmdesign";
        meta["version"] = tool_version();
        meta["config"] = config.to_json();
        meta["coherence_length_m"] = ctx.lc;
        meta["length_lc"] = n;
        meta["domain_width_m"] = g.domains().front().width;
        meta["report"] = report.to_json();

        const fs::path dir = config.output_dir;
        write_text_file(dir / "poling.csv", with_comments(comment, export_poling(g, config.poling_format)));
        write_text_file(dir / "design.json", meta.dump(2) + "\n");
        write_text_file(dir / "amplitude_trace.csv", with_comments(comment, amplitude_trace_csv(g, target, ctx.dk0)));
        write_text_file(dir / "pmf_scan.csv", with_comments(comment, pmf_scan_csv(g, ctx.dk0, config.pmf_scan_points)));
        if (config.design.anneal.record_trace && !report.trace.empty()) {
            write_text_file(dir / "anneal_trace.csv", with_comments(comment, anneal_trace_csv(report.trace)));
        }
        for (const auto& w : report.warnings) err << "warning: " << w << "\n";
        out << "algorithm=" << to_string(report.algorithm) << " domains=" << g.size()
            << " length_m=" << format_number(g.length()) << " hash=" << content_hash(g) << "\n";
        return kExitOk;
    });
}

int cmd_purity(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Context ctx = load_context(config);
        std::string origin;
        const Grating g = load_or_design(config, ctx, origin);
        PurityConfig pc = config.purity;
        pc.grid.workers = config.parallel;
        const auto eval = evaluate_purity(PhaseMatching::from_grating(g), ctx.model, config.process, pc);
        const auto comment = provenance(config, {"grating " + origin + ", hash " + content_hash(g),
                                                 "purity " + format_number(eval.purity),
                                                 "pump_bandwidth_rad_s " + format_number(eval.bandwidth),
                                                 "pmf_width_rad_s " + format_number(eval.pmf_width)});
        write_text_file(fs::path(config.output_dir) / "jsa.csv", jsa_magnitude_csv(eval.jsa, comment));
        write_text_file(fs::path(config.output_dir) / "schmidt.csv", schmidt_csv(eval.schmidt, comment));
        out << "purity=" << format_number(eval.purity) << " bandwidth_rad_s=" << format_number(eval.bandwidth) << "\n";
        return kExitOk;
    });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Context ctx = load_context(config);
        if (config.sweep_lengths.empty()) throw ConfigError("sweep.lengths_lc", "no lengths given");
        const auto rows = purity_vs_length(config.design, config.sweep_lengths, ctx.model, config.process,
                                           config.purity, config.parallel);
        const auto comment = provenance(config, {"coherence_length_m " + format_number(ctx.lc)});
        write_text_file(fs::path(config.output_dir) / "sweep.csv", sweep_csv(rows, comment));
        bool failed = false;
        for (const auto& r : rows) {
            out << "length_lc=" << r.length_lc << " purity=" << format_number(r.purity)
                << " bandwidth_rad_s=" << format_number(r.bandwidth) << " status=" << quote(r.status) << "\n";
            failed = failed || r.status != "ok";
        }
        if (failed) {
            report_error(err, "runtime", "sweep", "one or more lengths failed; see the status column");
            return kExitRuntime;
        }
        return kExitOk;
    });
}

int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Context ctx = load_context(config);
        std::string origin;
        const Grating g = load_or_design(config, ctx, origin);
        const std::string name = "poling." + std::string(to_string(config.poling_format)) + ".csv";
        const auto comment = provenance(config, {"grating " + origin + ", hash " + content_hash(g)});
        write_text_file(fs::path(config.output_dir) / name, with_comments(comment, export_poling(g, config.poling_format)));
        out << "exported=" << (fs::path(config.output_dir) / name).string() << " domains=" << g.size()
            << " hash=" << content_hash(g) << "\n";
        return kExitOk;
    });
}

int cmd_gvm_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Context ctx = load_context(config);
        json j = gvm_report(ctx.model, config.process).to_json();
        j["delta_k0_rad_m"] = central_delta_k(ctx.model, config.process);
        j["coherence_length_m"] = ctx.lc;
        j["process"] = config.process.describe();
        j["dispersion"] = ctx.model.describe();
        j["version"] = tool_version();
        write_text_file(fs::path(config.output_dir) / "gvm.json", j.dump(2) + "\n");
        out << j.dump(2) << "\n";
        return kExitOk;
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-phase-matching poling design and spectral purity evaluation", "qpmdesign"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    Overrides o;
    std::string config_path, out_dir, poling_path, format;
    std::uint64_t seed = 0;
    std::size_t parallel = 1;

    using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
    struct Entry {
        const char* name;
        const char* help;
        Command fn;
    };
    const Entry entries[] = {
        {"design", "Design a poling pattern and write it with diagnostics", cmd_design},
        {"purity", "Evaluate heralded-photon purity with an optimised pump", cmd_purity},
        {"sweep", "Purity versus crystal length", cmd_sweep},
        {"export", "Write a poling pattern in another CSV format", cmd_export},
        {"gvm-report", "Group-velocity matching diagnostics", cmd_gvm_report},
    };
    std::vector<std::pair<CLI::App*, Command>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--seed", seed, "RNG seed for annealing");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--poling", poling_path, "Poling CSV to evaluate instead of designing");
        sub->add_option("--format", format, "Poling CSV format: csv-boundaries or csv-widths");
        subs.emplace_back(sub, e.fn);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, "config", "command-line", e.what());
        return kExitConfig;
    }

    for (const auto& [sub, fn] : subs) {
        if (!sub->parsed()) continue;
        if (sub->count("--config") > 0) o.config = config_path;
        if (sub->count("--seed") > 0) o.seed = seed;
        if (sub->count("--out") > 0) o.out = out_dir;
        if (sub->count("--parallel") > 0) o.parallel = parallel;
        if (sub->count("--poling") > 0) o.poling = poling_path;
        if (sub->count("--format") > 0) o.format = format;
        RunConfig config;
        const int status = guarded(err, [&] {
            config = resolve_config(o);
            return kExitOk;
        });
        if (status != kExitOk) return status;
        return fn(config, out, err);
    }
    return kExitConfig;
}

}  // namespace qpm
