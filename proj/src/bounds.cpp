#include "delayctl/bounds.hpp"

#include "delayctl/error.hpp"
#include "delayctl/lyapunov.hpp"
#include "delayctl/roots.hpp"
#include "delayctl/spectral.hpp"

#include <cmath>
#include <numbers>

namespace delayctl {

namespace {

std::vector<Complex> concat(std::vector<Complex> a, const std::vector<Complex>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Roots of the filter part of Phi/Psi denominators, checked for stability.
std::vector<Complex> filter_poles(double k, DelayPair d) {
    if (d.tau == d.tau_hat) {
        std::vector<Complex> poles{Complex(-k, 0.0)};
        const PadePair p = pade_pair(d.tau);
        if (p.den.degree() >= 1) poles = concat(std::move(poles), poly_roots(p.den));
        return poles;
    }
    std::vector<Complex> poles = poly_roots(build_F(k, d).den());
    if (!all_in_left_half_plane(poles)) {
        throw Error(ErrorCode::StabilityLost, "Pade-substituted F is not Hurwitz at tau=" + std::to_string(d.tau) +
                                                  ", tau_hat=" + std::to_string(d.tau_hat));
    }
    return poles;
}

double vector_norm(const RationalTfVector& v, const std::vector<Complex>& poles, double tol) {
    double out = 0.0;
    for (const RationalTf& e : v.entries) {
        if (e.num().is_zero()) continue;
        out = std::max(out, l1_norm(e, poles, tol).value);
    }
    return out;
}

double scalar_norm(const RationalTf& tf, const std::vector<Complex>& poles, double tol) {
    if (tf.num().is_zero()) return 0.0;
    return l1_norm(tf, poles, tol).value;
}

}  // namespace

PlantModel::PlantModel(Matrix a_m, Vector b) : a_m_(std::move(a_m)), b_(std::move(b)), h_(build_H(a_m_, b_)) {
    h_poles_ = poly_roots(h_.entries.front().den());
}

double compute_f(const PlantModel& plant, double k, DelayPair d, double tol) {
    const std::vector<Complex> poles = concat(filter_poles(k, d), plant.H_poles());
    return vector_norm(build_Phi(k, d, plant.a_m(), plant.b()), poles, tol);
}

double compute_f(double k, double tau, double tau_hat, const Matrix& a_m, const Vector& b, double tol) {
    return compute_f(PlantModel(a_m, b), k, {tau, tau_hat}, tol);
}

double compute_fbar(const PlantModel& plant, double k, double tau, double tol) {
    return compute_f(plant, k, {tau, tau}, tol);
}

double compute_g(double k, DelayPair d, double tol) {
    const std::vector<Complex> poles = filter_poles(k, d);
    return scalar_norm(build_F(k, d), poles, tol);
}

double fbar0_upper_bound(const Matrix& a_m, const Vector& b, double k, double tol) {
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    const auto entries = build_Am_resolvent(a_m);
    const std::vector<Complex> poles = eigenvalues(a_m);
    double induced = 0.0;
    for (const auto& row : entries) {
        double sum = 0.0;
        for (const RationalTf& e : row) sum += scalar_norm(e, poles, tol);
        induced = std::max(induced, sum);
    }
    return (1.0 + induced) * b.norm() / k;
}

BoundReport reference_bounds(const PlantModel& plant, const ReferenceInputs& in) {
    if (!(in.yd_sup >= 0.0)) throw Error(ErrorCode::InvalidArgument, "yd_sup must be nonnegative");
    const Eigen::Index n = plant.a_m().rows();
    if (in.x0.size() != n) throw Error(ErrorCode::InvalidArgument, "x0 dimension does not match A_m");

    BoundReport r;
    const std::vector<Complex> fpoles = filter_poles(in.k, in.delays);
    const std::vector<Complex> poles = concat(fpoles, plant.H_poles());
    r.f = vector_norm(build_Phi(in.k, in.delays, plant.a_m(), plant.b()), poles, in.tol);
    r.g = scalar_norm(build_F(in.k, in.delays), fpoles, in.tol);
    r.rho_d = in.yd_sup == 0.0
                  ? 0.0
                  : vector_norm(build_Psi(in.k, in.delays, plant.a_m(), plant.b(), in.k_d), poles, in.tol) * in.yd_sup;

    if (!in.x0.isZero(0.0)) {
        const StateSpace free{plant.a_m(), in.x0, Matrix::Identity(n, n), Vector::Zero(n)};
        for (const NormResult& nr : impulse_l1_outputs(free, in.tol)) r.rho_ic = std::max(r.rho_ic, nr.value);
    }

    r.stability_margin = 1.0 - r.f * in.theta_b;
    if (r.stability_margin > 0.0) {
        r.rho_ref = (r.f * in.sigma_b + r.rho_d + r.rho_ic) / r.stability_margin;
    }
    return r;
}

TransientConstants transient_constants(const PlantModel& plant, const TransientInputs& in) {
    const Vector& b = plant.b();
    const double btb = b.squaredNorm();
    if (btb == 0.0) throw Error(ErrorCode::DegenerateInput, "b^T b = 0");
    if (!(in.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "Gamma must be positive");

    const std::vector<Complex> fpoles = filter_poles(in.k, in.delays);
    const std::vector<Complex> poles = concat(fpoles, plant.H_poles());
    const double f = vector_norm(build_Phi(in.k, in.delays, plant.a_m(), b), poles, in.tol);
    const double margin = 1.0 - f * in.theta_b;
    if (!(margin > 0.0)) throw Error(ErrorCode::StabilityLost, "stability condition f theta_b < 1 is violated");
    const double g = scalar_norm(build_F(in.k, in.delays), fpoles, in.tol);

    const Matrix p = solve_lyapunov(in.a_sp);
    const SymmetricSpectrum lam = symmetric_spectrum(p);

    TransientConstants tc;
    tc.sigma_bar_b = in.sigma_b + 2.0 * in.rho_u;
    tc.nu_m = 4.0 * (in.theta_b * in.theta_b + tc.sigma_bar_b * tc.sigma_bar_b) +
              4.0 * lam.max * (in.theta_b * in.d_theta + tc.sigma_bar_b * in.d_sigma);
    tc.est_error_bound = std::sqrt(tc.nu_m / (lam.min * in.gamma));

    const RowVector b_star = b.transpose() / btb;
    const double sF = scalar_norm(build_sF(in.k, in.delays), fpoles, in.tol);
    tc.b0 = sF * b_star.cwiseAbs().sum() + g * (b_star * in.a_sp).cwiseAbs().sum();
    // the pure delay e^{-tau s} shifts the impulse response and leaves its L1 norm unchanged
    double h_norm = 0.0;
    for (const RationalTf& e : plant.H().entries) h_norm = std::max(h_norm, scalar_norm(e, plant.H_poles(), in.tol));
    tc.b2 = tc.b0 * h_norm;
    tc.b_r = tc.b2 / margin;
    tc.b_u = g * tc.b2 * in.theta_b / margin + tc.b0;
    return tc;
}

double default_d_theta() { return std::numbers::pi * (1.0 + 0.3 * std::numbers::pi + 0.4); }

double default_rho_u(double g, double theta_b, double rho_ref, double sigma_b, double k_d, double yd_sup) {
    return 2.0 * g * (theta_b * rho_ref + sigma_b + k_d * yd_sup);
}

double default_d_sigma_bar(double sigma_rate, double k, double rho_u, double theta_b, double rho_ref,
                           double sigma_bar_b, double k_d, double yd_sup) {
    return sigma_rate + 2.0 * k * (rho_u + theta_b * (rho_ref + 1.0) + sigma_bar_b + k_d * yd_sup);
}

}  // namespace delayctl
