#include "delayctl/scenario.hpp"

#include "delayctl/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace delayctl {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
    throw Error(ErrorCode::ConfigInvalid, "field '" + field + "': " + msg);
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) field_error(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) field_error(field, "must be finite");
    return v;
}

Vector get_vector(const json& j, const std::string& field) {
    if (!j.is_array()) field_error(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_number(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

Matrix get_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) field_error(field, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) field_error(rf, "rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = get_number(j[r][c], rf + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

SignalSpec get_signal(const json& j, const std::string& field) {
    if (!j.is_object()) field_error(field, "expected {offset, terms}");
    SignalSpec s;
    if (j.contains("offset")) s.offset = get_number(j["offset"], field + ".offset");
    if (j.contains("terms")) {
        const json& terms = j["terms"];
        if (!terms.is_array()) field_error(field + ".terms", "expected an array");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tf = field + ".terms[" + std::to_string(i) + "]";
            const json& t = terms[i];
            if (!t.is_object()) field_error(tf, "expected an object");
            SignalTerm term;
            if (t.contains("amplitude")) term.amplitude = get_number(t["amplitude"], tf + ".amplitude");
            if (t.contains("frequency")) term.frequency = get_number(t["frequency"], tf + ".frequency");
            if (t.contains("phase")) term.phase = get_number(t["phase"], tf + ".phase");
            if (t.contains("kind")) {
                if (!t["kind"].is_string()) field_error(tf + ".kind", "expected \"sine\" or \"cosine\"");
                const std::string kind = t["kind"].get<std::string>();
                if (kind == "sine") {
                    term.kind = TrigKind::Sine;
                } else if (kind == "cosine") {
                    term.kind = TrigKind::Cosine;
                } else {
                    field_error(tf + ".kind", "expected \"sine\" or \"cosine\"");
                }
            }
            s.terms.push_back(term);
        }
    }
    return s;
}

json signal_json(const SignalSpec& s) {
    json terms = json::array();
    for (const SignalTerm& t : s.terms) {
        terms.push_back({{"amplitude", t.amplitude},
                         {"frequency", t.frequency},
                         {"phase", t.phase},
                         {"kind", t.kind == TrigKind::Sine ? "sine" : "cosine"}});
    }
    return {{"offset", s.offset}, {"terms", terms}};
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

double default_step(double gamma) { return gamma <= 1e6 ? 1e-5 : 2e-6; }

double ScenarioConfig::effective_step() const { return h_step > 0.0 ? h_step : default_step(Gamma); }

int ScenarioConfig::effective_stride() const {
    if (sample_stride > 0) return sample_stride;
    return std::max(1, static_cast<int>(std::lround(1e-3 / effective_step())));
}

double ScenarioConfig::effective_sigma_b() const { return sigma_b.value_or(signal_sup_bound(sigma_signal)); }

void validate(const ScenarioConfig& cfg) {
    const Eigen::Index n = cfg.A_m.rows();
    if (n == 0 || cfg.A_m.cols() != n) field_error("A_m", "must be a nonempty square matrix");
    if (cfg.b.size() != n) field_error("b", "length must match A_m");
    if (cfg.c.size() != n) field_error("c", "length must match A_m");
    if (cfg.A_sp.rows() != n || cfg.A_sp.cols() != n) field_error("A_sp", "must be n x n");
    if (cfg.theta_signal.size() != static_cast<std::size_t>(n)) field_error("theta_signal", "needs one signal per state");
    if (cfg.x0.size() != n) field_error("x0", "length must match A_m");
    if (cfg.x_des0.size() != n) field_error("x_des0", "length must match A_m");
    if (cfg.theta_hat0.size() != n) field_error("theta_hat0", "length must match A_m");
    if (!(cfg.tau >= 0.0)) field_error("tau", "must be >= 0");
    if (!(cfg.tau_hat >= 0.0)) field_error("tau_hat", "must be >= 0");
    if (!(cfg.k > 0.0)) field_error("k", "must be > 0");
    if (!(cfg.Gamma > 0.0)) field_error("Gamma", "must be > 0");
    if (!(cfg.nu > 0.0)) field_error("nu", "must be > 0");
    if (!(cfg.theta_b > 0.0)) field_error("theta_b", "must be > 0");
    if (!(cfg.sigma_bar_b > 0.0)) field_error("sigma_bar_b", "must be > 0");
    if (!(cfg.t_final > 0.0)) field_error("t_final", "must be > 0");
    if (!(cfg.h_step >= 0.0)) field_error("h_step", "must be > 0 (or 0 for the default)");
    if (cfg.sample_stride < 0) field_error("sample_stride", "must be positive");
    if (!(cfg.norm_tol > 0.0)) field_error("norm_tol", "must be > 0");
    if (cfg.sigma_b && !(*cfg.sigma_b >= 0.0)) field_error("sigma_b", "must be >= 0");
    if (cfg.theta_hat0.norm() > cfg.theta_b) field_error("theta_hat0", "norm exceeds theta_b");
    if (std::abs(cfg.sigma_hat0) > cfg.sigma_bar_b) field_error("sigma_hat0", "exceeds sigma_bar_b");
    if (!cfg.A_m.allFinite() || !cfg.A_sp.allFinite()) field_error("A_m", "entries must be finite");
}

ScenarioConfig example_scenario(double tau, double tau_hat) {
    using std::numbers::pi;
    ScenarioConfig cfg;
    cfg.A_m = Matrix{{0.0, 1.0}, {-1.0, -1.4}};
    cfg.b = Vector{{0.0, 1.0}};
    cfg.c = Vector{{1.0, 0.0}};
    cfg.A_sp = -100.0 * Matrix::Identity(2, 2);
    cfg.theta_signal = {
        SignalSpec{0.5, {{1.0, pi, 0.0, TrigKind::Cosine}}},
        SignalSpec{1.0, {{0.3, pi, 0.0, TrigKind::Sine}, {0.2, 2.0, 0.0, TrigKind::Cosine}}},
    };
    cfg.sigma_signal = SignalSpec{0.0, {{1.0, 0.5 * pi, 0.0, TrigKind::Sine}}};
    cfg.yd_signal = SignalSpec{0.0, {{1.0, 2.0 / pi, 0.0, TrigKind::Cosine}}};
    cfg.tau = tau;
    cfg.tau_hat = tau_hat;
    cfg.k = 25.0;
    cfg.k_d = 1.0;
    cfg.Gamma = 1e7;
    cfg.theta_b = 2.0;
    cfg.sigma_bar_b = 100.0;
    cfg.nu = 0.1;
    cfg.x0 = Vector{{0.0, 1.0}};
    cfg.x_des0 = Vector{{1.0, 0.0}};
    cfg.theta_hat0 = Vector::Zero(2);
    cfg.sigma_hat0 = 0.0;
    cfg.t_final = 10.0;
    return cfg;
}

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw Error(ErrorCode::ConfigInvalid,
                    "JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "top-level JSON value must be an object");

    ScenarioConfig cfg = example_scenario(0.0, 0.0);
    static const std::vector<std::string> known = {
        "A_m", "b", "c", "A_sp", "theta_signal", "sigma_signal", "yd_signal", "tau", "tau_hat", "k", "k_d",
        "Gamma", "theta_b", "sigma_bar_b", "nu", "x0", "x_des0", "theta_hat0", "sigma_hat0", "t_final",
        "h_step", "sample_stride", "simulate_reference", "sigma_b", "norm_tol", "description"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) field_error(key, "unknown field");
    }

    if (j.contains("A_m")) cfg.A_m = get_matrix(j["A_m"], "A_m");
    if (j.contains("b")) cfg.b = get_vector(j["b"], "b");
    if (j.contains("c")) cfg.c = get_vector(j["c"], "c");
    if (j.contains("A_sp")) cfg.A_sp = get_matrix(j["A_sp"], "A_sp");
    if (j.contains("theta_signal")) {
        const json& ts = j["theta_signal"];
        if (!ts.is_array()) field_error("theta_signal", "expected an array of signals");
        cfg.theta_signal.clear();
        for (std::size_t i = 0; i < ts.size(); ++i) cfg.theta_signal.push_back(get_signal(ts[i], "theta_signal[" + std::to_string(i) + "]"));
    }
    if (j.contains("sigma_signal")) cfg.sigma_signal = get_signal(j["sigma_signal"], "sigma_signal");
    if (j.contains("yd_signal")) cfg.yd_signal = get_signal(j["yd_signal"], "yd_signal");
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = get_number(j[key], key);
    };
    num("tau", cfg.tau);
    num("tau_hat", cfg.tau_hat);
    num("k", cfg.k);
    num("k_d", cfg.k_d);
    num("Gamma", cfg.Gamma);
    num("theta_b", cfg.theta_b);
    num("sigma_bar_b", cfg.sigma_bar_b);
    num("nu", cfg.nu);
    num("sigma_hat0", cfg.sigma_hat0);
    num("t_final", cfg.t_final);
    num("h_step", cfg.h_step);
    num("norm_tol", cfg.norm_tol);
    if (j.contains("x0")) cfg.x0 = get_vector(j["x0"], "x0");
    if (j.contains("x_des0")) cfg.x_des0 = get_vector(j["x_des0"], "x_des0");
    if (j.contains("theta_hat0")) cfg.theta_hat0 = get_vector(j["theta_hat0"], "theta_hat0");
    if (j.contains("sample_stride")) {
        if (!j["sample_stride"].is_number_integer()) field_error("sample_stride", "expected an integer");
        cfg.sample_stride = j["sample_stride"].get<int>();
    }
    if (j.contains("simulate_reference")) {
        if (!j["simulate_reference"].is_boolean()) field_error("simulate_reference", "expected a boolean");
        cfg.simulate_reference = j["simulate_reference"].get<bool>();
    }
    if (j.contains("sigma_b")) cfg.sigma_b = get_number(j["sigma_b"], "sigma_b");
    validate(cfg);
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["A_m"] = matrix_json(cfg.A_m);
    j["b"] = vector_json(cfg.b);
    j["c"] = vector_json(cfg.c);
    j["A_sp"] = matrix_json(cfg.A_sp);
    j["theta_signal"] = json::array();
    for (const SignalSpec& s : cfg.theta_signal) j["theta_signal"].push_back(signal_json(s));
    j["sigma_signal"] = signal_json(cfg.sigma_signal);
    j["yd_signal"] = signal_json(cfg.yd_signal);
    j["tau"] = cfg.tau;
    j["tau_hat"] = cfg.tau_hat;
    j["k"] = cfg.k;
    j["k_d"] = cfg.k_d;
    j["Gamma"] = cfg.Gamma;
    j["theta_b"] = cfg.theta_b;
    j["sigma_bar_b"] = cfg.sigma_bar_b;
    j["nu"] = cfg.nu;
    j["x0"] = vector_json(cfg.x0);
    j["x_des0"] = vector_json(cfg.x_des0);
    j["theta_hat0"] = vector_json(cfg.theta_hat0);
    j["sigma_hat0"] = cfg.sigma_hat0;
    j["t_final"] = cfg.t_final;
    j["h_step"] = cfg.h_step;
    j["sample_stride"] = cfg.sample_stride;
    j["simulate_reference"] = cfg.simulate_reference;
    if (cfg.sigma_b) j["sigma_b"] = *cfg.sigma_b;
    j["norm_tol"] = cfg.norm_tol;
    return j.dump(2);
}

}  // namespace delayctl
