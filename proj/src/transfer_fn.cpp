#include "delayctl/transfer_fn.hpp"

#include "delayctl/error.hpp"
#include "delayctl/roots.hpp"
#include "delayctl/spectral.hpp"

#include <cmath>
#include <numeric>

namespace delayctl {

namespace {

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void require_delays(double k, DelayPair d) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorCode::InvalidArgument, "filter bandwidth k must be positive");
    if (!(d.tau >= 0.0) || !(d.tau_hat >= 0.0) || !std::isfinite(d.tau) || !std::isfinite(d.tau_hat)) {
        throw Error(ErrorCode::InvalidArgument, "delays must be finite and nonnegative");
    }
}

// Unnormalized pieces of F = num / den for tau != tau_hat.
struct FParts {
    PadePair p_tau;
    PadePair p_hat;
    Polynomial dd;   // D_tau D_hat
    Polynomial den;  // s D_tau D_hat + k (N_tau D_hat - N_hat D_tau + D_tau D_hat)
};

FParts f_parts(double k, DelayPair d) {
    FParts f{pade_pair(d.tau), pade_pair(d.tau_hat), {}, {}};
    f.dd = f.p_tau.den * f.p_hat.den;
    const Polynomial mixed = f.p_tau.num * f.p_hat.den - f.p_hat.num * f.p_tau.den + f.dd;
    f.den = Polynomial::s() * f.dd + k * mixed;
    return f;
}

RationalTfVector scale_H(const RationalTfVector& h, const Polynomial& num, const Polynomial& den) {
    RationalTfVector out;
    out.entries.reserve(h.size());
    for (const RationalTf& e : h.entries) out.entries.emplace_back(e.num() * num, e.den() * den);
    return out;
}

}  // namespace

RationalTf::RationalTf(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorCode::InvalidArgument, "transfer function denominator is zero");
    const double lead = den_.leading();
    if (lead != 1.0) {
        num_ *= 1.0 / lead;
        den_ = den_.monic();
    }
}

Complex StateSpace::response(Complex s, Eigen::Index row) const {
    const Eigen::Index n = order();
    Complex direct(D(row), 0.0);
    if (n == 0) return direct;
    // companion matrices of Pade products span many decades; solve in balanced coordinates
    Matrix a = A;
    const Vector d = balance(a);
    Eigen::MatrixXcd m = -a.cast<Complex>();
    m.diagonal().array() += s;
    const Eigen::VectorXcd x = m.fullPivLu().solve(B.cwiseQuotient(d).cast<Complex>());
    return (C.row(row).cwiseProduct(d.transpose()).cast<Complex>() * x)(0) + direct;
}

Fraction pade_coefficient_exact(int i) {
    if (i < 0 || i > kPadeOrder) throw Error(ErrorCode::InvalidArgument, "Pade index out of range");
    const std::int64_t num = factorial(2 * kPadeOrder - i) * factorial(kPadeOrder);
    const std::int64_t den = factorial(2 * kPadeOrder) * factorial(i) * factorial(kPadeOrder - i);
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

const std::array<double, kPadeOrder + 1>& pade_coefficients() {
    static const std::array<double, kPadeOrder + 1> c = [] {
        std::array<double, kPadeOrder + 1> out{};
        for (int i = 0; i <= kPadeOrder; ++i) {
            const Fraction f = pade_coefficient_exact(i);
            out[static_cast<std::size_t>(i)] = static_cast<double>(f.num) / static_cast<double>(f.den);
        }
        return out;
    }();
    return c;
}

PadePair pade_pair(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "delay must be nonnegative");
    const auto& c = pade_coefficients();
    std::vector<double> num(kPadeOrder + 1);
    std::vector<double> den(kPadeOrder + 1);
    double power = 1.0;
    for (int i = 0; i <= kPadeOrder; ++i) {
        const double ci = c[static_cast<std::size_t>(i)] * power;
        den[static_cast<std::size_t>(i)] = ci;
        num[static_cast<std::size_t>(i)] = (i % 2 == 0) ? ci : -ci;
        power *= tau;
    }
    return {Polynomial(std::move(num)), Polynomial(std::move(den))};
}

RationalTf pade_delay(double tau) {
    PadePair p = pade_pair(tau);
    return {std::move(p.num), std::move(p.den)};
}

RationalTf build_F(double k, DelayPair d) {
    require_delays(k, d);
    if (d.tau == d.tau_hat) return {Polynomial{-k}, Polynomial{k, 1.0}};
    FParts f = f_parts(k, d);
    return {-k * f.dd, std::move(f.den)};
}

RationalTf build_delayed_F(double k, DelayPair d) {
    require_delays(k, d);
    if (d.tau == d.tau_hat) {
        const PadePair p = pade_pair(d.tau);
        return {-k * p.num, p.den * Polynomial{k, 1.0}};
    }
    FParts f = f_parts(k, d);
    return {-k * (f.p_tau.num * f.p_hat.den), std::move(f.den)};
}

RationalTf build_sF(double k, DelayPair d) {
    require_delays(k, d);
    if (d.tau == d.tau_hat) return {Polynomial{0.0, -k}, Polynomial{k, 1.0}};
    // -k (1 + (e^{-tau s} - e^{-tau_hat s} + 1) F) collapses to -k s D_tau D_hat / den
    FParts f = f_parts(k, d);
    return {-k * (Polynomial::s() * f.dd), std::move(f.den)};
}

RationalTfVector build_H(const Matrix& a_m, const Vector& b) {
    if (a_m.rows() != a_m.cols() || a_m.rows() != b.size() || b.size() == 0) {
        throw Error(ErrorCode::InvalidArgument, "build_H needs square A_m and matching b");
    }
    const ResolventExpansion r = leverrier_faddeev(a_m);
    if (!all_in_left_half_plane(poly_roots(r.char_poly))) throw Error(ErrorCode::NotHurwitz, "A_m is not Hurwitz");
    const Eigen::Index n = a_m.rows();
    RationalTfVector h;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> num(static_cast<std::size_t>(n), 0.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            // adjugate[j] multiplies s^(n-1-j)
            num[static_cast<std::size_t>(n - 1 - j)] = (r.adjugate[static_cast<std::size_t>(j)] * b)(i);
        }
        h.entries.emplace_back(Polynomial(std::move(num)), r.char_poly);
    }
    return h;
}

RationalTfVector build_Phi(double k, DelayPair d, const Matrix& a_m, const Vector& b) {
    require_delays(k, d);
    const RationalTfVector h = build_H(a_m, b);
    if (d.tau == d.tau_hat) {
        const PadePair p = pade_pair(d.tau);
        const Polynomial lowpass_den = p.den * Polynomial{k, 1.0};
        return scale_H(h, lowpass_den - k * p.num, lowpass_den);
    }
    const FParts f = f_parts(k, d);
    return scale_H(h, f.den - k * (f.p_tau.num * f.p_hat.den), f.den);
}

RationalTfVector build_Psi(double k, DelayPair d, const Matrix& a_m, const Vector& b, double k_d) {
    const RationalTf delayed = build_delayed_F(k, d);
    const RationalTfVector h = build_H(a_m, b);
    return scale_H(h, -k_d * delayed.num(), delayed.den());
}

std::vector<std::vector<RationalTf>> build_Am_resolvent(const Matrix& a_m) {
    const ResolventExpansion r = leverrier_faddeev(a_m);
    if (!all_in_left_half_plane(poly_roots(r.char_poly))) throw Error(ErrorCode::NotHurwitz, "A_m is not Hurwitz");
    const Eigen::Index n = a_m.rows();
    std::vector<Matrix> terms;
    for (const Matrix& adj : r.adjugate) terms.push_back(a_m * adj);
    std::vector<std::vector<RationalTf>> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            std::vector<double> num(static_cast<std::size_t>(n), 0.0);
            for (Eigen::Index m = 0; m < n; ++m) num[static_cast<std::size_t>(n - 1 - m)] = terms[static_cast<std::size_t>(m)](i, j);
            out[static_cast<std::size_t>(i)].emplace_back(Polynomial(std::move(num)), r.char_poly);
        }
    }
    return out;
}

StateSpace tf_to_statespace(const RationalTf& tf) {
    if (!tf.is_proper()) throw Error(ErrorCode::ImproperTf, "numerator degree exceeds denominator degree");
    const int n = tf.den().degree();
    const Polynomial& den = tf.den();
    const double d = tf.num()[n];
    StateSpace ss;
    ss.A = Matrix::Zero(n, n);
    ss.B = Vector::Zero(n);
    ss.C = Matrix::Zero(1, n);
    ss.D = Vector::Constant(1, d);
    if (n == 0) return ss;
    for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) {
        ss.A(n - 1, j) = -den[j];
        ss.C(0, j) = tf.num()[j] - d * den[j];
    }
    ss.B(n - 1) = 1.0;
    return ss;
}

}  // namespace delayctl
