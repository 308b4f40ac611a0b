#include "qpm/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qpm/errors.hpp"
#include "qpm/numeric.hpp"

namespace qpm {

namespace {

double poly_inverse(const std::array<double, 4>& coeff, double lambda_um) {
    double sum = 0.0;
    double inv = 1.0;
    for (double c : coeff) {
        sum += c * inv;
        inv /= lambda_um;
    }
    return sum;
}

template <std::size_t N>
std::array<double, N> read_array(const nlohmann::json& node, const std::string& field) {
    std::array<double, N> out{};
    if (!node.is_array() || node.size() != N) {
        throw ConfigError(field, "expected an array of " + std::to_string(N) + " numbers");
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = node[i].get<double>();
    return out;
}

}  // namespace

double SellmeierLaw::index(double lambda_um, double temperature_c) const {
    const double l2 = lambda_um * lambda_um;
    double n2 = a - ir * l2;
    for (const auto& [b, c] : poles) n2 += b / (1.0 - c / l2);
    double n = std::sqrt(n2);
    const double dt = temperature_c - reference_temperature_c;
    if (dt != 0.0) {
        n += poly_inverse(thermal_linear, lambda_um) * dt +
             poly_inverse(thermal_quadratic, lambda_um) * dt * dt;
    }
    return n;
}

std::string WavelengthWindow::describe() const {
    std::ostringstream os;
    os << "[" << format_number(min_m * 1e9, 12) << " nm, " << format_number(max_m * 1e9, 12) << " nm]";
    return os.str();
}

DispersionModel DispersionModel::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("dispersion.data_file", "cannot open dispersion data file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("dispersion.data_file", path.string() + ": " + e.what());
    }
    return from_json(doc);
}

DispersionModel DispersionModel::from_json(const nlohmann::json& doc) {
    try {
        DispersionModel model;
        const auto id = doc.at("model").get<std::string>();
        if (id != "ktp-sellmeier") throw ConfigError("model", "unsupported dispersion model '" + id + "'");
        model.kind_ = Kind::ktp_sellmeier;
        model.citation_ = doc.value("citation", "");
        const auto window = read_array<2>(doc.at("validity_nm"), "validity_nm");
        if (!(window[0] > 0.0 && window[1] > window[0])) {
            throw ConfigError("validity_nm", "validity window must be an increasing positive interval");
        }
        model.window_ = {window[0] * 1e-9, window[1] * 1e-9};
        const double t_ref = doc.value("reference_temperature_c", 25.0);
        for (const auto& [label, node] : doc.at("axes").items()) {
            SellmeierLaw law;
            law.a = node.at("a").get<double>();
            law.ir = node.value("ir", 0.0);
            for (const auto& pole : node.at("poles")) {
                const auto bc = read_array<2>(pole, "axes." + label + ".poles");
                law.poles.emplace_back(bc[0], bc[1]);
            }
            if (node.contains("thermal_linear")) {
                law.thermal_linear = read_array<4>(node["thermal_linear"], "axes." + label + ".thermal_linear");
            }
            if (node.contains("thermal_quadratic")) {
                law.thermal_quadratic =
                    read_array<4>(node["thermal_quadratic"], "axes." + label + ".thermal_quadratic");
            }
            law.reference_temperature_c = t_ref;
            model.axes_.push_back({label, std::move(law)});
        }
        if (model.axes_.empty()) throw ConfigError("axes", "dispersion model declares no axes");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("dispersion", std::string("malformed dispersion data: ") + e.what());
    }
}

DispersionModel DispersionModel::linear_synthetic(const LinearSyntheticParams& p) {
    if (!(p.omega_s > 0.0 && p.omega_i > 0.0 && p.omega_p > 0.0)) {
        throw ConfigError("linear_synthetic", "reference frequencies must be positive");
    }
    DispersionModel model;
    model.kind_ = Kind::linear_synthetic;
    model.citation_ = "synthetic affine dispersion";
    model.window_ = p.window;
    const double ks = p.k_signal_ref > 0.0 ? p.k_signal_ref : 1.5 * p.omega_s / kSpeedOfLight;
    const double ki = p.k_idler_ref > 0.0 ? p.k_idler_ref : 1.5 * p.omega_i / kSpeedOfLight;
    model.axes_.push_back({"p", LinearLaw{p.k0 + ks + ki, p.tau_p, p.omega_p}});
    model.axes_.push_back({"s", LinearLaw{ks, p.tau_s, p.omega_s}});
    model.axes_.push_back({"i", LinearLaw{ki, p.tau_i, p.omega_i}});
    return model;
}

std::string_view DispersionModel::kind_name() const noexcept {
    return kind_ == Kind::ktp_sellmeier ? "ktp-sellmeier" : "linear-synthetic";
}

std::vector<std::string> DispersionModel::axes() const {
    std::vector<std::string> out;
    for (const auto& a : axes_) out.push_back(a.label);
    return out;
}

const DispersionModel::Axis& DispersionModel::find_axis(std::string_view label) const {
    for (const auto& a : axes_) {
        if (a.label == label) return a;
    }
    throw DomainError("dispersion model " + std::string(kind_name()) + " has no axis '" +
                      std::string(label) + "'");
}

double DispersionModel::wavenumber(std::string_view axis, double omega, double temperature_c) const {
    const Axis& ax = find_axis(axis);
    const double lambda = omega_to_wavelength(omega);
    if (!(omega > 0.0) || !window_.contains(lambda)) {
        throw DomainError("wavelength " + format_number(lambda * 1e9, 8) +
                          " nm outside validity window " + window_.describe());
    }
    const double k = std::visit(
        [&](const auto& law) -> double {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, SellmeierLaw>) {
                return law.index(lambda * 1e6, temperature_c) * omega / kSpeedOfLight;
            } else {
                return law.wavenumber(omega);
            }
        },
        ax.law);
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("non-physical wavenumber on axis '" + std::string(axis) + "'");
    }
    return k;
}

nlohmann::json DispersionModel::describe() const {
    return {{"model", kind_name()}, {"citation", citation_},
            {"validity_nm", {std::round(window_.min_m * 1e15) / 1e6, std::round(window_.max_m * 1e15) / 1e6}}, {"axes", axes()}};
}

void ProcessSpec::validate() const {
    if (!(pump_wavelength > 0.0 && signal_wavelength > 0.0 && idler_wavelength > 0.0)) {
        throw ConfigError("process", "wavelengths must be positive");
    }
    const double lhs = 1.0 / pump_wavelength;
    const double rhs = 1.0 / signal_wavelength + 1.0 / idler_wavelength;
    if (std::abs(lhs - rhs) > 1e-9 * lhs) {
        throw ConfigError("process.idler_wavelength",
                          "energy conservation violated: 1/lp != 1/ls + 1/li");
    }
}

nlohmann::json ProcessSpec::describe() const {
    return {{"pump_wavelength_m", pump_wavelength},   {"signal_wavelength_m", signal_wavelength},
            {"idler_wavelength_m", idler_wavelength}, {"pump_axis", pump_axis},
            {"signal_axis", signal_axis},             {"idler_axis", idler_axis},
            {"temperature_c", temperature_c}};
}

ProcessSpec ProcessSpec::ktp_type2_degenerate() { return ProcessSpec{}; }

ProcessSpec ProcessSpec::synthetic(const LinearSyntheticParams& p) {
    ProcessSpec spec;
    spec.pump_wavelength = omega_to_wavelength(p.omega_p);
    spec.signal_wavelength = omega_to_wavelength(p.omega_s);
    spec.idler_wavelength = omega_to_wavelength(p.omega_i);
    spec.pump_axis = "p";
    spec.signal_axis = "s";
    spec.idler_axis = "i";
    return spec;
}

double delta_k(const DispersionModel& model, const ProcessSpec& spec, double omega_s, double omega_i) {
    const double t = spec.temperature_c;
    return model.wavenumber(spec.pump_axis, omega_s + omega_i, t) -
           model.wavenumber(spec.signal_axis, omega_s, t) - model.wavenumber(spec.idler_axis, omega_i, t);
}

double central_delta_k(const DispersionModel& model, const ProcessSpec& spec) {
    return delta_k(model, spec, spec.signal_omega(), spec.idler_omega());
}

int mismatch_sign(const DispersionModel& model, const ProcessSpec& spec) {
    return central_delta_k(model, spec) < 0.0 ? -1 : 1;
}

double coherence_length(const DispersionModel& model, const ProcessSpec& spec) {
    const double dk0 = central_delta_k(model, spec);
    if (dk0 == 0.0 || !std::isfinite(dk0)) {
        throw DomainError("process is phase-matched or inverted; poling undefined (delta_k0 = " +
                          format_number(dk0) + ")");
    }
    return kPi / std::abs(dk0);
}

double inverse_group_velocity(const DispersionModel& model, std::string_view axis, double omega,
                              double temperature_c, double step_fraction) {
    const double h = step_fraction * omega;
    return (model.wavenumber(axis, omega + h, temperature_c) -
            model.wavenumber(axis, omega - h, temperature_c)) /
           (2.0 * h);
}

nlohmann::json GvmReport::to_json() const {
    return {{"k1_pump_s_per_m", k1_pump},
            {"k1_signal_s_per_m", k1_signal},
            {"k1_idler_s_per_m", k1_idler},
            {"symmetric_residual_s_per_m", symmetric_residual},
            {"pmf_angle_deg", pmf_angle_deg}};
}

GvmReport gvm_report(const DispersionModel& model, const ProcessSpec& spec) {
    GvmReport r;
    const double t = spec.temperature_c;
    r.k1_pump = inverse_group_velocity(model, spec.pump_axis, spec.pump_omega(), t);
    r.k1_signal = inverse_group_velocity(model, spec.signal_axis, spec.signal_omega(), t);
    r.k1_idler = inverse_group_velocity(model, spec.idler_axis, spec.idler_omega(), t);
    r.symmetric_residual = r.k1_pump - 0.5 * (r.k1_signal + r.k1_idler);
    const double num = -(r.k1_pump - r.k1_signal);
    const double den = r.k1_pump - r.k1_idler;
    r.pmf_angle_deg = den == 0.0 ? 90.0 : std::atan(num / den) * 180.0 / kPi;
    return r;
}

}  // namespace qpm
