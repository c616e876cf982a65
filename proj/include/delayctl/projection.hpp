#pragma once

#include <span>

namespace delayctl {

/**
 * @brief Projection operator confining an adaptive estimate to ||theta||_2 <= bound.
 *
 * With phi(theta) = ((1 + nu) theta^T theta - bound^2) / (nu bound^2), the raw
 * update is returned unchanged inside the set {phi < 0} or when it points
 * inward; otherwise its component along grad phi is scaled by (1 - phi).
 * Writes the result to `out` (same length as `estimate` and `raw`).
 */
void proj(std::span<const double> estimate, std::span<const double> raw, double bound, double nu,
          std::span<double> out);

/// Scalar form used for sigma_hat.
double proj(double estimate, double raw, double bound, double nu);

}  // namespace delayctl
