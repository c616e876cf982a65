#include "delayctl/stability_margin.hpp"

#include "delayctl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace delayctl {

namespace {

constexpr double kTauStep = 0.02;
constexpr double kBandStep = 5e-3;

// f theta_b - 1, with loss of Pade stability reported as +inf
double margin_at(const PlantModel& plant, double k, double theta_b, DelayPair d, double tol) {
    try {
        return compute_f(plant, k, d, tol) * theta_b - 1.0;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StabilityLost) return std::numeric_limits<double>::infinity();
        throw;
    }
}

template <class Fn>
double bisect(Fn&& violated, double good, double bad, double width) {
    while (std::abs(bad - good) > width) {
        const double mid = 0.5 * (good + bad);
        (violated(mid) ? bad : good) = mid;
    }
    return 0.5 * (good + bad);
}

void check_inputs(double k, double theta_b) {
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    if (!(theta_b > 0.0)) throw Error(ErrorCode::InvalidArgument, "theta_b must be positive");
}

}  // namespace

double find_tau_s(const PlantModel& plant, double k, double theta_b, const MarginOptions& opts) {
    check_inputs(k, theta_b);
    auto m = [&](double tau) { return margin_at(plant, k, theta_b, {tau, tau}, opts.norm_tol); };
    if (m(0.0) >= 0.0) {
        throw Error(ErrorCode::ConditionViolatedAtZero, "f(0,0) theta_b >= 1 for k=" + std::to_string(k));
    }
    double good = 0.0;
    for (;;) {
        const double next = std::min(good + kTauStep, opts.tau_max);
        if (m(next) >= 0.0) return bisect([&](double t) { return m(t) >= 0.0; }, good, next, opts.width);
        if (next >= opts.tau_max) break;
        good = next;
    }
    throw Error(ErrorCode::NoRootInRange, "f(tau,tau) theta_b < 1 up to tau_max=" + std::to_string(opts.tau_max));
}

DeltaBand delta_band(const PlantModel& plant, double k, double theta_b, double tau, const MarginOptions& opts) {
    check_inputs(k, theta_b);
    if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonnegative");
    auto violated = [&](double tau_hat) {
        return margin_at(plant, k, theta_b, {tau, tau_hat}, opts.norm_tol) >= 0.0;
    };
    if (violated(tau)) {
        throw Error(ErrorCode::ConditionViolatedOnIdentity, "f(tau,tau) theta_b >= 1 at tau=" + std::to_string(tau));
    }

    DeltaBand band;
    double good = tau;
    for (;;) {
        const double next = good + kBandStep;
        if (next > tau + opts.tau_max) {
            band.delta_upper = opts.tau_max;
            break;
        }
        if (violated(next)) {
            band.delta_upper = bisect(violated, good, next, opts.width) - tau;
            break;
        }
        good = next;
    }

    good = tau;
    for (;;) {
        const double next = good - kBandStep;
        if (next < 0.0) {
            if (violated(0.0)) {
                band.delta_lower = tau - bisect(violated, good, 0.0, opts.width);
            } else {
                band.delta_lower = tau;
                band.lower_clipped = true;
            }
            break;
        }
        if (violated(next)) {
            band.delta_lower = tau - bisect(violated, good, next, opts.width);
            break;
        }
        good = next;
    }
    return band;
}

}  // namespace delayctl
