#pragma once

#include "delayctl/linalg.hpp"

#include <initializer_list>
#include <span>
#include <vector>

namespace delayctl {

/**
 * @brief Real polynomial with coefficients in ascending degree order.
 *
 * Leading zeros are always trimmed, so degree() == coeffs().size() - 1 for a
 * nonzero polynomial. The zero polynomial has no coefficients and degree -1.
 *
 * Sums and differences drop leading coefficients that are pure cancellation
 * noise: a result coefficient smaller than kCancellationTol times the sum of
 * the operand magnitudes is treated as zero.
 */
class Polynomial {
public:
    static constexpr double kCancellationTol = 1e-12;

    Polynomial() = default;
    Polynomial(std::initializer_list<double> ascending);
    explicit Polynomial(std::vector<double> ascending);

    static Polynomial constant(double c);
    /// The monomial s.
    static Polynomial s();
    /// Real polynomial with the given roots; complex roots must come in conjugate pairs.
    static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return c_; }
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    [[nodiscard]] double leading() const;
    [[nodiscard]] double operator[](int i) const;
    [[nodiscard]] double max_abs_coeff() const noexcept;

    [[nodiscard]] double operator()(double s) const noexcept;
    [[nodiscard]] Complex operator()(Complex s) const noexcept;

    [[nodiscard]] Polynomial derivative() const;
    /// Divides every coefficient by the leading one.
    [[nodiscard]] Polynomial monic() const;

    Polynomial& operator*=(double a);
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double a, Polynomial p);
    friend Polynomial operator-(Polynomial p);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim_exact();
    std::vector<double> c_;
};

}  // namespace delayctl
