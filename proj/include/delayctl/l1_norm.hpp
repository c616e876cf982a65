#pragma once

#include "delayctl/transfer_fn.hpp"

#include <optional>
#include <span>
#include <vector>

namespace delayctl {

inline constexpr double kDefaultNormTol = 1e-5;

/// L1 norm of an impulse response with its truncation certificate.
struct NormResult {
    double value = 0.0;
    double truncation_time = 0.0;
    double tail_bound = 0.0;
    double tolerance = kDefaultNormTol;
};

/**
 * @brief ||tf||_L1 = |D| + integral of |h(t)| over [0, inf).
 *
 * The strictly proper part is realized in controllable canonical form,
 * balanced, and propagated with the exact transition matrix on a graded grid
 * whose step is 0.05 / |fastest pole still alive|. The integral of h over
 * each grid interval is exact (augmented exponential); intervals where h
 * changes sign are split at the crossing. Integration stops at the first
 * checkpoint T where the modal tail bound sum |c_i| / |Re p_i| drops below
 * tol.
 *
 * Throws NotHurwitz for a non-Hurwitz denominator, ImproperTf for an
 * improper tf and TailBoundFailure if T would exceed 1e6 / alpha.
 */
NormResult l1_norm(const RationalTf& tf, double tol = kDefaultNormTol);

/// As above with the denominator roots supplied by the caller.
NormResult l1_norm(const RationalTf& tf, std::span<const Complex> poles, double tol);

/// Max over entries of the per-entry L1 norms (induced sup-to-sup gain of a column operator).
NormResult l1_norm_vector(const RationalTfVector& v, double tol = kDefaultNormTol);

/**
 * @brief Per-output L1 norms of the free response y = C e^{At} B (+ D delta).
 *
 * Used for responses that have no convenient scalar transfer function, such
 * as (sI - A_m)^-1 x0.
 */
std::vector<NormResult> impulse_l1_outputs(const StateSpace& ss, double tol = kDefaultNormTol);

}  // namespace delayctl
