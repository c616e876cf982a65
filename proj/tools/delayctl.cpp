// delayctl: simulation and stability analysis of the delay-compensated L1 adaptive controller.

#include "delayctl/bounds.hpp"
#include "delayctl/continuation.hpp"
#include "delayctl/error.hpp"
#include "delayctl/metrics.hpp"
#include "delayctl/scenario.hpp"
#include "delayctl/simulation.hpp"
#include "delayctl/stability_margin.hpp"
#include "delayctl/trace_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace delayctl;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDiverged = 2, kConditionViolated = 3 };

struct Common {
    std::string config;
    std::optional<double> k;
    std::optional<double> theta_b;
    std::optional<double> tol;
};

ScenarioConfig load(const Common& c) {
    ScenarioConfig cfg = c.config.empty() ? example_scenario(0.0, 0.0) : load_scenario(c.config);
    if (c.k) cfg.k = *c.k;
    if (c.theta_b) cfg.theta_b = *c.theta_b;
    if (c.tol) cfg.norm_tol = *c.tol;
    validate(cfg);
    return cfg;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Scenario JSON file (defaults to the built-in example plant)");
    cmd->add_option("--k", c.k, "Filter bandwidth k");
    cmd->add_option("--theta-b", c.theta_b, "Uncertainty bound theta_b");
    cmd->add_option("--tol", c.tol, "L1 norm tolerance");
}

void require_nonnegative(const char* name, double v) {
    if (!(v >= 0.0)) throw Error(ErrorCode::ConfigInvalid, std::string("field '") + name + "': must be nonnegative");
}

// Opens `dir/name` for writing, refusing to replace an existing file unless forced.
std::ofstream open_output(const fs::path& dir, const std::string& name, bool force) {
    const fs::path path = dir / name;
    if (fs::exists(path) && !force) {
        throw Error(ErrorCode::ConfigInvalid, "refusing to overwrite " + path.string() + " (use --force)");
    }
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path.string());
    return os;
}

void check_outputs(const fs::path& dir, const std::vector<std::string>& names, bool force) {
    if (force) return;
    for (const auto& n : names) {
        if (fs::exists(dir / n)) throw Error(ErrorCode::ConfigInvalid, "refusing to overwrite " + (dir / n).string() + " (use --force)");
    }
}

std::string k_label(double k) {
    std::ostringstream ss;
    ss << k;
    return ss.str();
}

int cmd_simulate(const Common& c, const std::string& out, double t_start, bool reference, bool force, bool gnuplot) {
    ScenarioConfig cfg = load(c);
    if (reference) cfg.simulate_reference = true;
    if (!(t_start < cfg.t_final)) throw Error(ErrorCode::ConfigInvalid, "field 't_start': must be below t_final");

    const fs::path dir(out);
    std::vector<std::string> names{"trace.csv", "metrics.json"};
    if (gnuplot) names.push_back("trace.gp");
    check_outputs(dir, names, force);

    const SimTrace trace = simulate_closed_loop(cfg);
    fs::create_directories(dir);
    {
        auto os = open_output(dir, "trace.csv", force);
        write_trace_csv(os, trace);
    }
    json m;
    m["diverged"] = trace.diverged;
    m["t_start"] = t_start;
    m["samples"] = trace.size();
    if (trace.diverged_index) m["diverged_time"] = trace.t[*trace.diverged_index];
    try {
        const TrackingMetrics tm = tracking_metrics(trace, t_start);
        m["max_err"] = tm.max_err;
        m["rms_err"] = tm.rms_err;
        m["osc_freq"] = tm.osc_freq;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyWindow) throw;
        m["max_err"] = nullptr;
        m["rms_err"] = nullptr;
        m["osc_freq"] = nullptr;
    }
    open_output(dir, "metrics.json", force) << m.dump(2) << '\n';
    if (gnuplot) {
        const std::size_t n = cfg.n();
        const std::size_t y_col = 3 * n + 4;  // 1-based column of y
        open_output(dir, "trace.gp", force) << "set datafile separator ','\n"
                                            << "set key autotitle columnhead\n"
                                            << "set xlabel 't [s]'\n"
                                            << "plot 'trace.csv' using 1:" << y_col << " with lines, '' using 1:"
                                            << y_col + 1 << " with lines\n";
    }
    std::cout << m.dump(2) << '\n';
    return trace.diverged ? kDiverged : kOk;
}

int cmd_norm(const Common& c, double tau, double tau_hat) {
    const ScenarioConfig cfg = load(c);
    require_nonnegative("tau", tau);
    require_nonnegative("tau_hat", tau_hat);
    const PlantModel plant(cfg.A_m, cfg.b);
    json j;
    j["k"] = cfg.k;
    j["tau"] = tau;
    j["tau_hat"] = tau_hat;
    try {
        const double f = compute_f(plant, cfg.k, {tau, tau_hat}, cfg.norm_tol);
        const double g = compute_g(cfg.k, {tau, tau_hat}, cfg.norm_tol);
        j["f"] = f;
        j["g"] = g;
        j["f_theta_b"] = f * cfg.theta_b;
        j["stable"] = f * cfg.theta_b < 1.0;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::StabilityLost) throw;
        j["f"] = nullptr;
        j["g"] = nullptr;
        j["f_theta_b"] = nullptr;
        j["stable"] = false;
        j["error"] = e.what();
    }
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_chart(const Common& c, std::optional<double> level, double tau_max, const std::string& out, bool force,
              bool gnuplot) {
    const ScenarioConfig cfg = load(c);
    const double lvl = level.value_or(1.0 / cfg.theta_b);
    if (!(lvl > 0.0)) throw Error(ErrorCode::ConfigInvalid, "field 'level': must be positive");
    if (!(tau_max > 0.0)) throw Error(ErrorCode::ConfigInvalid, "field 'tau_max': must be positive");

    const fs::path dir(out);
    const std::string stem = "chart_k" + k_label(cfg.k);
    std::vector<std::string> names{stem + ".csv", stem + ".json"};
    if (gnuplot) names.push_back(stem + ".gp");
    check_outputs(dir, names, force);

    const PlantModel plant(cfg.A_m, cfg.b);
    ContinuationOptions opts;
    opts.tau_max = tau_max;
    const CurveTrace curve = trace_level_curve(plant, cfg.k, lvl, std::nullopt, opts);

    fs::create_directories(dir);
    {
        auto os = open_output(dir, stem + ".csv", force);
        write_curve_csv(os, curve);
    }
    const std::string sidecar = curve_sidecar_json(curve);
    open_output(dir, stem + ".json", force) << sidecar << '\n';
    if (gnuplot) {
        open_output(dir, stem + ".gp", force) << "set datafile separator ','\n"
                                              << "set xlabel 'tau'\nset ylabel 'tau_hat'\nset size square\n"
                                              << "plot '" << stem << ".csv' using 1:2 with lines title 'f = "
                                              << lvl << "', x with lines dashtype 2 title 'identity'\n";
    }
    std::cout << sidecar << '\n';
    return kOk;
}

int cmd_tau_s(const Common& c, double tau_max) {
    const ScenarioConfig cfg = load(c);
    const PlantModel plant(cfg.A_m, cfg.b);
    MarginOptions opts;
    opts.norm_tol = cfg.norm_tol;
    opts.tau_max = tau_max;
    json j;
    j["k"] = cfg.k;
    j["theta_b"] = cfg.theta_b;
    j["tau_s"] = find_tau_s(plant, cfg.k, cfg.theta_b, opts);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

struct BoundsFlags {
    std::optional<double> tau, tau_hat, gamma, rho_u, d_theta, d_sigma;
};

int cmd_bounds(const Common& c, const BoundsFlags& fl) {
    ScenarioConfig cfg = load(c);
    if (fl.tau) cfg.tau = *fl.tau;
    if (fl.tau_hat) cfg.tau_hat = *fl.tau_hat;
    if (fl.gamma) cfg.Gamma = *fl.gamma;
    validate(cfg);
    const PlantModel plant(cfg.A_m, cfg.b);

    ReferenceInputs in;
    in.k = cfg.k;
    in.delays = {cfg.tau, cfg.tau_hat};
    in.k_d = cfg.k_d;
    in.theta_b = cfg.theta_b;
    in.sigma_b = cfg.effective_sigma_b();
    in.yd_sup = signal_sup_bound(cfg.yd_signal);
    in.x0 = cfg.x0;
    in.tol = cfg.norm_tol;
    const BoundReport r = reference_bounds(plant, in);

    json j;
    j["k"] = cfg.k;
    j["tau"] = cfg.tau;
    j["tau_hat"] = cfg.tau_hat;
    j["f"] = r.f;
    j["g"] = r.g;
    j["rho_d"] = r.rho_d;
    j["rho_ic"] = r.rho_ic;
    j["rho_ref"] = r.rho_ref ? json(*r.rho_ref) : json(nullptr);
    j["stability_margin"] = r.stability_margin;
    j["diverged"] = r.diverged();
    if (r.diverged()) {
        j["transient"] = nullptr;
        std::cout << j.dump(2) << '\n';
        return kConditionViolated;
    }

    TransientInputs ti;
    ti.k = cfg.k;
    ti.delays = in.delays;
    ti.a_sp = cfg.A_sp;
    ti.theta_b = cfg.theta_b;
    ti.sigma_b = in.sigma_b;
    ti.rho_u = fl.rho_u.value_or(default_rho_u(r.g, cfg.theta_b, *r.rho_ref, in.sigma_b, cfg.k_d, in.yd_sup));
    ti.d_theta = fl.d_theta.value_or(default_d_theta());
    ti.d_sigma = fl.d_sigma.value_or(default_d_sigma_bar(signal_rate_bound(cfg.sigma_signal), cfg.k, ti.rho_u,
                                                         cfg.theta_b, *r.rho_ref, cfg.sigma_bar_b, cfg.k_d, in.yd_sup));
    ti.gamma = cfg.Gamma;
    ti.tol = cfg.norm_tol;
    const TransientConstants tc = transient_constants(plant, ti);
    j["transient"] = {{"Gamma", cfg.Gamma},
                      {"rho_u", ti.rho_u},
                      {"d_theta", ti.d_theta},
                      {"d_sigma", ti.d_sigma},
                      {"sigma_bar_b", tc.sigma_bar_b},
                      {"nu_m", tc.nu_m},
                      {"est_error_bound", tc.est_error_bound},
                      {"b0", tc.b0},
                      {"b2", tc.b2},
                      {"b_r", tc.b_r},
                      {"b_u", tc.b_u}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int exit_code(const Error& e) {
    switch (e.code()) {
        case ErrorCode::StabilityLost:
        case ErrorCode::ConditionViolatedAtZero:
        case ErrorCode::ConditionViolatedOnIdentity:
            return kConditionViolated;
        default:
            return kConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Delay-compensated L1 adaptive control: simulation and stability analysis"};
    app.require_subcommand(1);

    Common common;
    std::string out = ".";
    bool force = false;
    bool gnuplot = false;

    auto* sim = app.add_subcommand("simulate", "Run the closed loop; writes trace.csv and metrics.json");
    add_common(sim, common);
    double t_start = 5.0;
    bool reference = false;
    sim->add_option("--out", out, "Output directory");
    sim->add_option("--t-start", t_start, "Start of the metrics window [s]");
    sim->add_flag("--reference", reference, "Also integrate the reference system (adds yref, uref)");
    sim->add_flag("--force", force, "Overwrite existing outputs");
    sim->add_flag("--gnuplot", gnuplot, "Write a gnuplot script next to the CSV");

    auto* norm = app.add_subcommand("norm", "Print f, g and the stability condition as JSON");
    add_common(norm, common);
    double tau = 0.0, tau_hat = 0.0;
    norm->add_option("--tau", tau, "Input delay");
    norm->add_option("--tau-hat", tau_hat, "Compensation delay");

    auto* chart = app.add_subcommand("chart", "Trace the stability boundary f = level; writes chart_k<k>.csv");
    add_common(chart, common);
    std::optional<double> level;
    double tau_max = 0.6;
    chart->add_option("--level", level, "Level of f (default 1/theta_b)");
    chart->add_option("--tau-max", tau_max, "Upper tau limit");
    chart->add_option("--out", out, "Output directory");
    chart->add_flag("--force", force, "Overwrite existing outputs");
    chart->add_flag("--gnuplot", gnuplot, "Write a gnuplot script next to the CSV");

    auto* taus = app.add_subcommand("tau-s", "Print the identity-line delay margin");
    add_common(taus, common);
    double search_max = 1.0;
    taus->add_option("--tau-max", search_max, "Search limit");

    auto* bounds = app.add_subcommand("bounds", "Print reference-system bounds and transient constants as JSON");
    add_common(bounds, common);
    BoundsFlags bf;
    bounds->add_option("--tau", bf.tau, "Input delay");
    bounds->add_option("--tau-hat", bf.tau_hat, "Compensation delay");
    bounds->add_option("--gamma", bf.gamma, "Adaptation gain");
    bounds->add_option("--rho-u", bf.rho_u, "Control bound rho_u");
    bounds->add_option("--d-theta", bf.d_theta, "Bound on |d theta/dt|");
    bounds->add_option("--d-sigma", bf.d_sigma, "Bound on |d sigma/dt|");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    try {
        if (*sim) return cmd_simulate(common, out, t_start, reference, force, gnuplot);
        if (*norm) return cmd_norm(common, tau, tau_hat);
        if (*chart) return cmd_chart(common, level, tau_max, out, force, gnuplot);
        if (*taus) return cmd_tau_s(common, search_max);
        if (*bounds) return cmd_bounds(common, bf);
    } catch (const Error& e) {
        std::cerr << "delayctl: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "delayctl: " << e.what() << '\n';
        return kConfig;
    }
    return kConfig;
}
