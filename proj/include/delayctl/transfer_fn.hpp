#pragma once

#include "delayctl/linalg.hpp"
#include "delayctl/polynomial.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace delayctl {

/// Scalar transfer function num/den with a monic denominator.
class RationalTf {
public:
    RationalTf(Polynomial num, Polynomial den);

    [[nodiscard]] const Polynomial& num() const noexcept { return num_; }
    [[nodiscard]] const Polynomial& den() const noexcept { return den_; }

    [[nodiscard]] bool is_proper() const noexcept { return num_.degree() <= den_.degree(); }
    [[nodiscard]] bool is_strictly_proper() const noexcept { return num_.degree() < den_.degree(); }

    [[nodiscard]] Complex operator()(Complex s) const { return num_(s) / den_(s); }
    [[nodiscard]] double dc_gain() const { return num_(0.0) / den_(0.0); }

private:
    Polynomial num_;
    Polynomial den_;
};

/// Column of scalar transfer functions driven by one scalar input.
struct RationalTfVector {
    std::vector<RationalTf> entries;

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] const RationalTf& operator[](std::size_t i) const { return entries[i]; }
};

/// Single-input realization x' = A x + B u, y = C x + D u.
struct StateSpace {
    Matrix A;
    Vector B;
    Matrix C;
    Vector D;

    [[nodiscard]] Eigen::Index order() const noexcept { return A.rows(); }
    [[nodiscard]] Eigen::Index outputs() const noexcept { return C.rows(); }
    /// C (sI - A)^-1 B + D for output row `row`.
    [[nodiscard]] Complex response(Complex s, Eigen::Index row = 0) const;
};

inline constexpr int kPadeOrder = 5;

/// Exact coefficient c_i = (10-i)! 5! / (10! i! (5-i)!) as a reduced fraction.
struct Fraction {
    std::int64_t num;
    std::int64_t den;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};
Fraction pade_coefficient_exact(int i);
const std::array<double, kPadeOrder + 1>& pade_coefficients();

/// Unnormalized (5,5) Pade pair: e^{-tau s} ~ num / den with num(0) = den(0) = 1.
struct PadePair {
    Polynomial num;
    Polynomial den;
};
PadePair pade_pair(double tau);

/// Pade approximant of e^{-tau s} as a normalized transfer function.
RationalTf pade_delay(double tau);

/// Delay configuration of the compensated filter.
struct DelayPair {
    double tau;
    double tau_hat;
};

/**
 * @brief F(s) = -k / (s + k e^{-tau s} - k e^{-tau_hat s} + k) with Pade-substituted delays.
 *
 * On the identity line tau == tau_hat the delay terms cancel exactly and the
 * result is literally -k/(s+k).
 */
RationalTf build_F(double k, DelayPair delays);

/// e^{-tau s} F(s), with the common Pade denominator of e^{-tau s} cancelled.
RationalTf build_delayed_F(double k, DelayPair delays);

/// s F(s), the derivative filter used by the transient bounds.
RationalTf build_sF(double k, DelayPair delays);

/// H(s) = (sI - A_m)^-1 b by Leverrier-Faddeev; every entry shares det(sI - A_m).
RationalTfVector build_H(const Matrix& a_m, const Vector& b);

/// Phi(s) = H(s) (1 + e^{-tau s} F(s)).
RationalTfVector build_Phi(double k, DelayPair delays, const Matrix& a_m, const Vector& b);

/// Psi(s) = -H(s) e^{-tau s} F(s) k_d.
RationalTfVector build_Psi(double k, DelayPair delays, const Matrix& a_m, const Vector& b, double k_d);

/// Row-major n x n entries of A_m (sI - A_m)^-1.
std::vector<std::vector<RationalTf>> build_Am_resolvent(const Matrix& a_m);

/// Controllable canonical realization; throws Error(ImproperTf) for deg num > deg den.
StateSpace tf_to_statespace(const RationalTf& tf);

}  // namespace delayctl
