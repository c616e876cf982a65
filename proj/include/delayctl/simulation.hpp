#pragma once

#include "delayctl/scenario.hpp"

#include <optional>
#include <vector>

namespace delayctl {

inline constexpr double kDivergenceThreshold = 1e6;

/**
 * @brief Uniformly sampled trajectories of one run.
 *
 * Adaptive-loop columns (x, x_hat, u, theta_hat, sigma_hat, y) are filled by
 * simulate_closed_loop; reference columns (x_ref, u_ref, y_ref) when the
 * reference system is integrated; y_des always. Every filled column has
 * t.size() entries.
 */
struct SimTrace {
    std::size_t n = 0;
    std::vector<double> t;
    std::vector<Vector> x;
    std::vector<Vector> x_hat;
    std::vector<double> u;
    std::vector<Vector> theta_hat;
    std::vector<double> sigma_hat;
    std::vector<double> y;
    std::vector<double> y_des;
    std::vector<Vector> x_ref;
    std::vector<double> u_ref;
    std::vector<double> y_ref;

    bool diverged = false;
    std::optional<std::size_t> diverged_index;  ///< first sample past the divergence threshold

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool has_adaptive() const noexcept { return !x.empty(); }
    [[nodiscard]] bool has_reference() const noexcept { return !x_ref.empty(); }
    [[nodiscard]] Vector x_tilde(std::size_t i) const { return x_hat[i] - x[i]; }
};

/**
 * @brief Integrates plant, state predictor, filtered control law, projection
 * adaptive laws and the desired system with fixed-step RK4.
 *
 * The control law is u' = -k (u + theta_hat^T x + sigma_hat - k_d y_d).
 * Delayed inputs are read from history buffers with linear interpolation.
 * When cfg.simulate_reference is set the reference system is integrated in
 * the same loop. Divergence (||x||_inf > 1e6) truncates the trace and sets
 * the flag instead of throwing.
 */
SimTrace simulate_closed_loop(const ScenarioConfig& cfg);

/// Nonadaptive reference system with the true theta(t), sigma(t), plus the desired system.
SimTrace simulate_reference(const ScenarioConfig& cfg);

/// Desired system only.
SimTrace simulate_desired(const ScenarioConfig& cfg);

/// max_i ||v_i||_inf over a column of vectors.
double sup_norm(const std::vector<Vector>& column);

}  // namespace delayctl
