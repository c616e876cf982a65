#include "delayctl/roots.hpp"

#include "delayctl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace delayctl {

namespace {

struct Eval {
    Complex value;
    Complex derivative;
    double magnitude;  // sum |a_i| |z|^i, the Horner rounding scale
};

Eval evaluate(const std::vector<double>& c, Complex z) {
    Complex p(0.0, 0.0);
    Complex dp(0.0, 0.0);
    double mag = 0.0;
    const double r = std::abs(z);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
        mag = mag * r + std::abs(*it);
    }
    return {p, dp, mag};
}

// Starting points from the upper convex hull of (i, log|a_i|).
std::vector<Complex> initial_guesses(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<int> pts;
    std::vector<double> logs(c.size(), -std::numeric_limits<double>::infinity());
    for (int i = 0; i <= n; ++i) {
        if (c[i] != 0.0) logs[i] = std::log(std::abs(c[i]));
    }
    for (int i = 0; i <= n; ++i) {
        if (c[i] == 0.0) continue;
        while (pts.size() >= 2) {
            const int a = pts[pts.size() - 2];
            const int b = pts.back();
            // drop b if it lies on or below the segment a -> i
            const double cross = (b - a) * (logs[i] - logs[a]) - (i - a) * (logs[b] - logs[a]);
            if (cross >= 0.0) {
                pts.pop_back();
            } else {
                break;
            }
        }
        pts.push_back(i);
    }
    std::vector<Complex> z;
    z.reserve(static_cast<std::size_t>(n));
    constexpr double kRotation = 0.7;
    for (std::size_t e = 0; e + 1 < pts.size(); ++e) {
        const int lo = pts[e];
        const int hi = pts[e + 1];
        const int m = hi - lo;
        const double radius = std::exp((logs[lo] - logs[hi]) / m);
        for (int j = 0; j < m; ++j) {
            const double angle = 2.0 * std::numbers::pi * j / m + std::numbers::pi / (2.0 * n) + kRotation * e;
            z.push_back(std::polar(radius, angle));
        }
    }
    return z;
}

}  // namespace

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double cluster_tol) {
    std::vector<RootCluster> clusters;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Complex sum = roots[i];
        int count = 1;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double scale = std::max(1.0, std::abs(roots[i]));
            if (std::abs(roots[j] - roots[i]) <= cluster_tol * scale) {
                used[j] = true;
                sum += roots[j];
                ++count;
            }
        }
        clusters.push_back({sum / static_cast<double>(count), count});
    }
    return clusters;
}

std::vector<Complex> poly_roots(const Polynomial& p, const RootOptions& opts) {
    if (p.degree() < 1) throw Error(ErrorCode::InvalidArgument, "poly_roots needs degree >= 1");

    std::vector<double> c = p.coeffs();
    std::vector<Complex> roots;
    // exact zero roots
    std::size_t zeros = 0;
    while (zeros < c.size() && c[zeros] == 0.0) ++zeros;
    roots.assign(zeros, Complex(0.0, 0.0));
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 0) return roots;
    if (n == 1) {
        roots.emplace_back(-c[0] / c[1], 0.0);
        return roots;
    }

    std::vector<Complex> z = initial_guesses(c);
    std::vector<bool> settled(z.size(), false);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        bool all_settled = true;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (settled[i]) continue;
            const Eval e = evaluate(c, z[i]);
            if (std::abs(e.value) <= 4.0 * eps * e.magnitude) {
                settled[i] = true;
                continue;
            }
            all_settled = false;
            const Complex ratio = e.value / e.derivative;
            Complex repulsion(0.0, 0.0);
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const Complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[i] -= step;
            if (std::abs(step) <= 2.0 * eps * std::abs(z[i])) settled[i] = true;
        }
        if (all_settled) break;
    }

    for (const Complex& zi : z) {
        const Eval e = evaluate(c, zi);
        if (!(std::abs(e.value) <= opts.residual_tol * e.magnitude)) {
            throw Error(ErrorCode::NoConvergence,
                        "Aberth iteration did not converge in " + std::to_string(opts.max_iterations) +
                            " iterations (degree " + std::to_string(n) + ")");
        }
    }

    // replace coincident roots by the cluster mean
    for (const RootCluster& cl : cluster_roots(z, opts.cluster_tol)) {
        roots.insert(roots.end(), static_cast<std::size_t>(cl.multiplicity), cl.center);
    }
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

bool all_in_left_half_plane(const std::vector<Complex>& roots, double margin) {
    return std::all_of(roots.begin(), roots.end(), [margin](const Complex& r) { return r.real() < -margin; });
}

bool is_hurwitz(const Polynomial& p) { return all_in_left_half_plane(poly_roots(p)); }

}  // namespace delayctl
