#include "delayctl/continuation.hpp"

#include "delayctl/error.hpp"
#include "delayctl/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

namespace delayctl {

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::DomainBoundary: return "domain-boundary";
        case Termination::StepFailure: return "step-failure";
        case Termination::MaxPoints: return "max-points";
    }
    return "unknown";
}

std::size_t CurveTrace::fold_count() const {
    std::size_t n = 0;
    for (const auto& p : points) n += p.is_fold ? 1 : 0;
    return n;
}

std::vector<double> CurveTrace::identity_crossings() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& a = points[i - 1];
        const auto& b = points[i];
        const double da = a.tau_hat - a.tau;
        const double db = b.tau_hat - b.tau;
        if (da == 0.0) {
            out.push_back(a.tau);
        } else if (da * db < 0.0) {
            const double s = da / (da - db);
            out.push_back(a.tau + s * (b.tau - a.tau));
        }
    }
    if (!points.empty() && points.back().tau_hat == points.back().tau) out.push_back(points.back().tau);
    return out;
}

namespace {

using Vec2 = std::array<double, 2>;

struct Domain {};  // raised when the level function leaves the Pade-stable region

class LevelFunction {
public:
    LevelFunction(const PlantModel& plant, double k, double level, const ContinuationOptions& opts)
        : plant_(plant), k_(k), level_(level), opts_(opts) {}

    double operator()(const Vec2& z) const {
        try {
            return compute_f(plant_, k_, {z[0], z[1]}, opts_.norm_tol) - level_;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::StabilityLost) throw Domain{};
            throw;
        }
    }

    // Central differences, one-sided where the backward point would leave the quadrant.
    Vec2 gradient(const Vec2& z, double gz) const {
        const double h = opts_.fd_step;
        std::array<Vec2, 4> probes{};
        std::array<bool, 2> central{};
        for (int i = 0; i < 2; ++i) {
            central[i] = z[i] - h >= 0.0;
            probes[2 * i] = z;
            probes[2 * i][i] += h;
            probes[2 * i + 1] = z;
            probes[2 * i + 1][i] -= central[i] ? h : 0.0;
        }
        std::array<double, 4> values{};
        std::array<bool, 4> lost{};
        parallel_for(4, [&](std::size_t j) {
            if (j % 2 == 1 && !central[j / 2]) {
                values[j] = gz;
                return;
            }
            try {
                values[j] = (*this)(probes[j]);
            } catch (const Domain&) {
                lost[j] = true;
            }
        });
        for (bool l : lost) {
            if (l) throw Domain{};
        }
        Vec2 g{};
        for (int i = 0; i < 2; ++i) g[i] = (values[2 * i] - values[2 * i + 1]) / (central[i] ? 2.0 * h : h);
        return g;
    }

    // Newton on the free coordinate with the other held at `fixed`; nullopt on failure.
    std::optional<Vec2> solve_along(int free, Vec2 z) const {
        for (int it = 0; it < 2 * opts_.max_newton; ++it) {
            const double g = (*this)(z);
            if (std::abs(g) <= opts_.corrector_tol) return z;
            Vec2 zp = z;
            const double h = opts_.fd_step;
            const bool backward = z[free] - h >= 0.0;
            zp[free] += backward ? -h : h;
            const double gp = (*this)(zp);
            const double slope = backward ? (g - gp) / h : (gp - g) / h;
            if (slope == 0.0 || !std::isfinite(slope)) return std::nullopt;
            double step = -g / slope;
            step = std::clamp(step, -0.05, 0.05);
            z[free] = std::max(0.0, z[free] + step);
        }
        return std::nullopt;
    }

private:
    const PlantModel& plant_;
    double k_;
    double level_;
    const ContinuationOptions& opts_;
};

Vec2 unit_tangent(const Vec2& grad) {
    const double n = std::hypot(grad[0], grad[1]);
    if (!(n > 0.0)) throw Error(ErrorCode::NoConvergence, "vanishing gradient on the level curve");
    return {-grad[1] / n, grad[0] / n};
}

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

}  // namespace

double axis_start(const PlantModel& plant, double k, double level, const ContinuationOptions& opts) {
    const LevelFunction G(plant, k, level, opts);
    auto violated = [&](double tau_hat) {
        try {
            return G({0.0, tau_hat}) >= 0.0;
        } catch (const Domain&) {
            return true;
        }
    };
    if (violated(0.0)) throw Error(ErrorCode::StartNotConverged, "f(0,0) is already above the level");
    double good = 0.0;
    double bad = -1.0;
    for (double th = 0.02; th <= 2.0 * opts.tau_max + 1e-12; th += 0.02) {
        if (violated(th)) {
            bad = th;
            break;
        }
        good = th;
    }
    if (bad < 0.0) throw Error(ErrorCode::StartNotConverged, "no level crossing on the tau_hat axis");
    while (bad - good > 1e-6) {
        const double mid = 0.5 * (good + bad);
        (violated(mid) ? bad : good) = mid;
    }
    return 0.5 * (good + bad);
}

CurveTrace trace_level_curve(const PlantModel& plant, double k, double level,
                             std::optional<std::array<double, 2>> start_guess, const ContinuationOptions& opts) {
    if (!(level > 0.0)) throw Error(ErrorCode::InvalidArgument, "level must be positive");
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    const LevelFunction G(plant, k, level, opts);

    CurveTrace curve;
    curve.k = k;
    curve.level = level;

    Vec2 z = start_guess ? *start_guess : Vec2{0.0, axis_start(plant, k, level, opts)};
    if (z[0] < 0.0 || z[1] < 0.0) throw Error(ErrorCode::StartNotConverged, "start guess outside tau, tau_hat >= 0");
    Vec2 grad{};
    double gz = 0.0;
    try {
        const auto corrected = G.solve_along(1, z);
        if (!corrected) throw Error(ErrorCode::StartNotConverged, "Newton along tau_hat did not converge");
        z = *corrected;
        gz = G(z);
        grad = G.gradient(z, gz);
    } catch (const Domain&) {
        throw Error(ErrorCode::StartNotConverged, "start guess is outside the Pade-stable region");
    }
    Vec2 t = unit_tangent(grad);
    if (t[0] < 0.0) t = {-t[0], -t[1]};
    curve.points.push_back({z[0], z[1], gz + level, t, false});

    double h = opts.h_init;
    int easy = 0;
    bool lost_stability = false;

    // Places the final point where the curve meets the axis `axis` = value.
    auto land = [&](int axis, double value) {
        const int free = 1 - axis;
        const double s = (value - z[axis]) / t[axis];
        Vec2 guess = z;
        guess[axis] = value;
        guess[free] = std::max(0.0, z[free] + s * t[free]);
        try {
            if (const auto p = G.solve_along(free, guess)) {
                curve.points.push_back({(*p)[0], (*p)[1], G(*p) + level, t, false});
            }
        } catch (const Domain&) {
        }
        curve.termination = Termination::DomainBoundary;
    };

    while (curve.points.size() < opts.max_points) {
        const Vec2 pred{z[0] + h * t[0], z[1] + h * t[1]};
        if (pred[0] < 0.0) return land(0, 0.0), curve;
        if (pred[1] < 0.0) return land(1, 0.0), curve;
        if (pred[0] > opts.tau_max) return land(0, opts.tau_max), curve;

        // chord Newton with the Jacobian rows grad(z) and t
        const double det = grad[0] * t[1] - grad[1] * t[0];
        Vec2 w = pred;
        bool converged = false;
        bool left = false;
        int iterations = 0;
        double prev = std::numeric_limits<double>::infinity();
        try {
            for (; iterations < opts.max_newton; ++iterations) {
                const double gw = G(w);
                if (std::abs(gw) <= opts.corrector_tol) {
                    converged = true;
                    break;
                }
                if (iterations >= 2 && std::abs(gw) > 0.5 * prev) break;
                prev = std::abs(gw);
                const double r1 = t[0] * (w[0] - pred[0]) + t[1] * (w[1] - pred[1]);
                const double d0 = (-gw * t[1] + r1 * grad[1]) / det;
                const double d1 = (-r1 * grad[0] + gw * t[0]) / det;
                w = {w[0] + d0, w[1] + d1};
                if (w[0] < 0.0 || w[1] < 0.0) {
                    left = true;
                    break;
                }
            }
        } catch (const Domain&) {
            lost_stability = true;
        }

        Vec2 grad_w{};
        Vec2 t_w{};
        double gw = 0.0;
        if (converged) {
            try {
                gw = G(w);
                grad_w = G.gradient(w, gw);
                t_w = unit_tangent(grad_w);
                if (dot(t_w, t) < 0.0) t_w = {-t_w[0], -t_w[1]};
                // sharp turns are resolved with short steps
                if (dot(t_w, t) < 0.5 && h > 4.0 * opts.h_min) converged = false;
            } catch (const Domain&) {
                lost_stability = true;
                converged = false;
            }
        }

        if (!converged) {
            if (left && h <= 4.0 * opts.h_min) {
                // corrector keeps leaving the quadrant: the curve meets an axis here
                return land(w[0] < 0.0 ? 0 : 1, 0.0), curve;
            }
            h *= 0.5;
            easy = 0;
            if (h < opts.h_min) {
                curve.termination = lost_stability ? Termination::DomainBoundary : Termination::StepFailure;
                return curve;
            }
            continue;
        }

        lost_stability = false;
        const bool fold = (t_w[0] > 0.0) != (t[0] > 0.0) && t_w[0] != 0.0 && t[0] != 0.0;
        z = w;
        grad = grad_w;
        t = t_w;
        curve.points.push_back({z[0], z[1], gw + level, t, fold});
        if (iterations <= 3 && ++easy >= 3) {
            h = std::min(h * 1.3, opts.h_max);
            easy = 0;
        }
    }
    curve.termination = Termination::MaxPoints;
    return curve;
}

void write_curve_csv(std::ostream& os, const CurveTrace& curve) {
    os << "tau,tau_hat,f,is_fold\n";
    char buf[96];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", p.tau, p.tau_hat, p.f_value, p.is_fold ? 1 : 0);
        os << buf;
    }
}

std::string curve_sidecar_json(const CurveTrace& curve) {
    nlohmann::json j;
    j["k"] = curve.k;
    j["level"] = curve.level;
    j["termination"] = std::string(to_string(curve.termination));
    j["points"] = curve.points.size();
    j["folds"] = curve.fold_count();
    j["identity_crossings"] = curve.identity_crossings();
    return j.dump(2);
}

}  // namespace delayctl
