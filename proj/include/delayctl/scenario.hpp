#pragma once

#include "delayctl/linalg.hpp"
#include "delayctl/signal.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace delayctl {

/// Complete description of one closed-loop experiment.
struct ScenarioConfig {
    Matrix A_m;
    Vector b;
    Vector c;
    Matrix A_sp;
    std::vector<SignalSpec> theta_signal;  ///< one spec per state component
    SignalSpec sigma_signal;
    SignalSpec yd_signal;
    double tau = 0.0;
    double tau_hat = 0.0;
    double k = 25.0;
    double k_d = 1.0;
    double Gamma = 1e7;
    double theta_b = 2.0;
    double sigma_bar_b = 100.0;
    double nu = 0.1;
    Vector x0;
    Vector x_des0;
    Vector theta_hat0;
    double sigma_hat0 = 0.0;
    double t_final = 10.0;
    double h_step = 0.0;  ///< 0 selects default_step(Gamma)
    int sample_stride = 0;  ///< 0 selects a 1 ms sampling interval
    bool simulate_reference = false;

    // analysis-only settings used by the bound reports
    std::optional<double> sigma_b;  ///< defaults to the sup bound of sigma_signal
    double norm_tol = 1e-5;

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(A_m.rows()); }
    [[nodiscard]] double effective_step() const;
    [[nodiscard]] int effective_stride() const;
    [[nodiscard]] double effective_sigma_b() const;
};

/// 1e-5 for Gamma <= 1e6, 2e-6 above.
double default_step(double gamma);

/// Throws Error(ConfigInvalid) naming the offending field.
void validate(const ScenarioConfig& cfg);

/**
 * @brief The two-state example plant with the example uncertainty,
 * reference signal and controller settings, at the given delays.
 *
 * A_sp is -100 I (Hurwitz).
 */
ScenarioConfig example_scenario(double tau, double tau_hat);

/// Parses a JSON scenario document; missing fields keep example_scenario(0, 0) values.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

}  // namespace delayctl
