#pragma once

#include "delayctl/bounds.hpp"

namespace delayctl {

struct MarginOptions {
    double width = 1e-4;      ///< bisection bracket width in delay units
    double norm_tol = kDefaultNormTol;
    double tau_max = 1.0;     ///< search limit
};

/**
 * @brief Smallest positive root of f(tau, tau) theta_b - 1.
 *
 * The bracket grows from 0 in steps of 0.02 and is then bisected.
 * Throws ConditionViolatedAtZero if f(0, 0) theta_b >= 1 and NoRootInRange
 * if the condition still holds at opts.tau_max.
 */
double find_tau_s(const PlantModel& plant, double k, double theta_b, const MarginOptions& opts = {});

struct DeltaBand {
    double delta_lower = 0.0;  ///< stable for tau_hat down to tau - delta_lower
    double delta_upper = 0.0;  ///< stable for tau_hat up to tau + delta_upper
    bool lower_clipped = false;  ///< delta_lower reached tau (tau_hat = 0)
    [[nodiscard]] double width() const noexcept { return delta_lower + delta_upper; }
};

/**
 * @brief Compensation-delay interval [tau - delta_lower, tau + delta_upper]
 * around the identity line on which f theta_b < 1.
 *
 * Scans outward from tau_hat = tau in steps of 5e-3 until the condition
 * fails (a non-Hurwitz Pade denominator counts as failure), then bisects.
 * Throws ConditionViolatedOnIdentity if f(tau, tau) theta_b >= 1.
 */
DeltaBand delta_band(const PlantModel& plant, double k, double theta_b, double tau, const MarginOptions& opts = {});

}  // namespace delayctl
