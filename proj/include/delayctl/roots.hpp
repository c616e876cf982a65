#pragma once

#include "delayctl/polynomial.hpp"

#include <vector>

namespace delayctl {

struct RootOptions {
    int max_iterations = 200;
    /// Roots closer than this (relative to their magnitude, absolute below 1) are merged.
    double cluster_tol = 1e-6;
    /// Accepted backward error |p(z)| / sum |a_i||z|^i.
    double residual_tol = 1e-10;
};

/// A group of numerically coincident roots.
struct RootCluster {
    Complex center;
    int multiplicity;
};

/**
 * @brief All complex roots of p by Aberth simultaneous iteration.
 *
 * Starting points are spread over circles whose radii come from the upper
 * convex hull of (i, log|a_i|), which keeps the iteration fast on
 * polynomials whose roots span many orders of magnitude (products of Pade
 * denominators with very different delays). Members of a cluster are
 * replaced by the cluster mean.
 *
 * Throws Error(NoConvergence) when the iteration cap is hit before every
 * root meets residual_tol.
 */
std::vector<Complex> poly_roots(const Polynomial& p, const RootOptions& opts = {});

/// Groups roots that lie within opts.cluster_tol of each other.
std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double cluster_tol = 1e-6);

inline constexpr double kHurwitzMargin = 1e-9;

/// True iff every root has real part below -kHurwitzMargin.
bool is_hurwitz(const Polynomial& p);

/// Hurwitz test on an already computed root set.
bool all_in_left_half_plane(const std::vector<Complex>& roots, double margin = kHurwitzMargin);

}  // namespace delayctl
