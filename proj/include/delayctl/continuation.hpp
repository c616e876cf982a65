#pragma once

#include "delayctl/bounds.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace delayctl {

struct ContinuationPoint {
    double tau = 0.0;
    double tau_hat = 0.0;
    double f_value = 0.0;
    std::array<double, 2> tangent{1.0, 0.0};  ///< unit (d tau, d tau_hat)
    bool is_fold = false;                      ///< tau-component of the tangent changed sign here
};

enum class Termination { DomainBoundary, StepFailure, MaxPoints };

std::string_view to_string(Termination t) noexcept;

struct CurveTrace {
    std::vector<ContinuationPoint> points;
    double level = 0.5;
    double k = 25.0;
    Termination termination = Termination::MaxPoints;

    [[nodiscard]] std::size_t fold_count() const;
    /// tau at each crossing of tau_hat = tau, linearly interpolated between consecutive points.
    [[nodiscard]] std::vector<double> identity_crossings() const;
};

struct ContinuationOptions {
    double tau_max = 0.6;
    double h_init = 5e-3;
    double h_min = 1e-4;
    double h_max = 2e-2;
    double fd_step = 1e-4;
    double corrector_tol = 1e-6;  ///< on |f - level|
    int max_newton = 8;
    std::size_t max_points = 2000;
    double norm_tol = 1e-10;      ///< inner norm tolerance, keeps finite differences clean
};

/**
 * @brief Traces f(tau, tau_hat) = level by pseudo-arclength continuation.
 *
 * The start guess is first corrected along tau_hat. Tangents come from the
 * null space of the finite-difference gradient, initially oriented toward
 * increasing tau. Each step predicts along the tangent and corrects with
 * Newton on {f - level = 0, tangent . (z - z_pred) = 0}. A loss of Pade
 * stability is treated as the edge of the domain. When the curve leaves
 * tau >= 0 or tau_hat >= 0 the last point is placed on that axis.
 *
 * Throws StartNotConverged if the start cannot be corrected.
 */
CurveTrace trace_level_curve(const PlantModel& plant, double k, double level,
                             std::optional<std::array<double, 2>> start_guess = std::nullopt,
                             const ContinuationOptions& opts = {});

/// tau_hat solving f(0, tau_hat) = level, by a scan in steps of 0.02 and bisection.
double axis_start(const PlantModel& plant, double k, double level, const ContinuationOptions& opts = {});

/// `tau,tau_hat,f,is_fold` rows in curve order.
void write_curve_csv(std::ostream& os, const CurveTrace& curve);
/// JSON sidecar: k, level, termination, point count, folds and identity crossings.
std::string curve_sidecar_json(const CurveTrace& curve);

}  // namespace delayctl
