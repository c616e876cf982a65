#pragma once

#include "delayctl/l1_norm.hpp"
#include "delayctl/transfer_fn.hpp"

#include <optional>
#include <vector>

namespace delayctl {

/**
 * @brief Plant data (A_m, b) with its input-to-state resolvent precomputed.
 *
 * Construction validates that A_m is Hurwitz. Immutable afterwards, so one
 * instance can be shared by concurrent f-evaluations.
 */
class PlantModel {
public:
    PlantModel(Matrix a_m, Vector b);

    [[nodiscard]] const Matrix& a_m() const noexcept { return a_m_; }
    [[nodiscard]] const Vector& b() const noexcept { return b_; }
    [[nodiscard]] const RationalTfVector& H() const noexcept { return h_; }
    [[nodiscard]] const std::vector<Complex>& H_poles() const noexcept { return h_poles_; }

private:
    Matrix a_m_;
    Vector b_;
    RationalTfVector h_;
    std::vector<Complex> h_poles_;
};

/// f(tau, tau_hat) = ||Phi||_L1; throws StabilityLost when a Pade-substituted denominator is not Hurwitz.
double compute_f(const PlantModel& plant, double k, DelayPair delays, double tol = kDefaultNormTol);
double compute_f(double k, double tau, double tau_hat, const Matrix& a_m, const Vector& b,
                 double tol = kDefaultNormTol);

/// f on the identity line, f(tau, tau).
double compute_fbar(const PlantModel& plant, double k, double tau, double tol = kDefaultNormTol);

/// g(tau, tau_hat) = ||F||_L1.
double compute_g(double k, DelayPair delays, double tol = kDefaultNormTol);

/// (1 + ||A_m (sI - A_m)^-1||_L1) ||b||_2 / k, the induced norm taken as the max row sum.
double fbar0_upper_bound(const Matrix& a_m, const Vector& b, double k, double tol = kDefaultNormTol);

/// Stability-condition quantities of the nonadaptive reference system.
struct BoundReport {
    double f = 0.0;
    double g = 0.0;
    double rho_d = 0.0;
    double rho_ic = 0.0;
    std::optional<double> rho_ref;  ///< empty when the condition f theta_b < 1 fails
    double stability_margin = 0.0;  ///< 1 - f theta_b

    [[nodiscard]] bool diverged() const noexcept { return !rho_ref.has_value(); }
};

struct ReferenceInputs {
    double k = 25.0;
    DelayPair delays{0.0, 0.0};
    double k_d = 1.0;
    double theta_b = 2.0;
    double sigma_b = 1.0;
    double yd_sup = 1.0;
    Vector x0;
    double tol = kDefaultNormTol;
};

BoundReport reference_bounds(const PlantModel& plant, const ReferenceInputs& in);

/// Constants of the adaptive-to-reference transient bounds.
struct TransientConstants {
    double sigma_bar_b = 0.0;
    double nu_m = 0.0;
    double est_error_bound = 0.0;
    double b0 = 0.0;
    double b2 = 0.0;
    double b_r = 0.0;
    double b_u = 0.0;
};

struct TransientInputs {
    double k = 25.0;
    DelayPair delays{0.0, 0.0};
    Matrix a_sp;
    double theta_b = 2.0;
    double sigma_b = 1.0;
    double rho_u = 0.0;
    double d_theta = 0.0;
    double d_sigma = 0.0;
    double gamma = 1e7;
    double tol = kDefaultNormTol;
};

/**
 * @brief sigma_bar_b, nu_m, the sqrt(nu_m / (lambda_min(P) Gamma)) estimation
 * error bound, and b0, b2, b_r, b_u.
 *
 * b0 = ||sF|| ||b*||_1 + ||F|| ||b* A_sp||_1 with b* = b^T / (b^T b); the
 * row norms are max-row-sum norms because b* acts on the vector signal x~.
 * Throws DegenerateInput for b = 0 and StabilityLost when f theta_b >= 1.
 */
TransientConstants transient_constants(const PlantModel& plant, const TransientInputs& in);

/// Default derivative bound of theta(t) used when the scenario gives none.
double default_d_theta();

/// rho_u = 2 g (theta_b rho_ref + sigma_b + k_d yd_sup).
double default_rho_u(double g, double theta_b, double rho_ref, double sigma_b, double k_d, double yd_sup);

/**
 * @brief Bound on d/dt of sigma(t) + u(t - tau) - u(t - tau_hat).
 *
 * sigma_rate plus twice the control-law rate bound
 * k (rho_u + theta_b (rho_ref + 1) + sigma_bar_b + k_d yd_sup).
 */
double default_d_sigma_bar(double sigma_rate, double k, double rho_u, double theta_b, double rho_ref,
                           double sigma_bar_b, double k_d, double yd_sup);

}  // namespace delayctl
