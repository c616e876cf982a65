#include "delayctl/polynomial.hpp"

#include "delayctl/error.hpp"

#include <algorithm>
#include <cmath>

namespace delayctl {

namespace {

Polynomial combine(const Polynomial& a, const Polynomial& b, double sign) {
    const auto& ca = a.coeffs();
    const auto& cb = b.coeffs();
    const std::size_t n = std::max(ca.size(), cb.size());
    std::vector<double> out(n, 0.0);
    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        out[i] += ca[i];
        scale[i] += std::abs(ca[i]);
    }
    for (std::size_t i = 0; i < cb.size(); ++i) {
        out[i] += sign * cb[i];
        scale[i] += std::abs(cb[i]);
    }
    while (!out.empty() && std::abs(out.back()) <= Polynomial::kCancellationTol * scale[out.size() - 1]) {
        out.pop_back();
    }
    return Polynomial(std::move(out));
}

}  // namespace

Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) { trim_exact(); }

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim_exact(); }

Polynomial Polynomial::constant(double c) { return Polynomial{c}; }

Polynomial Polynomial::s() { return Polynomial{0.0, 1.0}; }

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
    std::vector<Complex> c{Complex(leading, 0.0)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    std::vector<double> re(c.size());
    std::transform(c.begin(), c.end(), re.begin(), [](const Complex& z) { return z.real(); });
    return Polynomial(std::move(re));
}

double Polynomial::leading() const {
    if (c_.empty()) throw Error(ErrorCode::InvalidArgument, "zero polynomial has no leading coefficient");
    return c_.back();
}

double Polynomial::operator[](int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(i)] : 0.0;
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

double Polynomial::operator()(double s) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Complex Polynomial::operator()(Complex s) const noexcept {
    Complex acc(0.0, 0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
    Polynomial p = *this;
    p *= 1.0 / leading();
    p.c_.back() = 1.0;
    return p;
}

Polynomial& Polynomial::operator*=(double a) {
    if (a == 0.0) {
        c_.clear();
        return *this;
    }
    for (double& v : c_) v *= a;
    return *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return combine(a, b, 1.0); }

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return combine(a, b, -1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
}

Polynomial operator*(double a, Polynomial p) {
    p *= a;
    return p;
}

Polynomial operator-(Polynomial p) {
    p *= -1.0;
    return p;
}

void Polynomial::trim_exact() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

}  // namespace delayctl
