#include "delayctl/l1_norm.hpp"

#include "delayctl/error.hpp"
#include "delayctl/roots.hpp"
#include "delayctl/spectral.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>

namespace delayctl {

namespace {

constexpr double kStepFraction = 0.05;   // step * |fastest live pole|
constexpr double kDeadDecades = 50.0;    // mode is dropped once Re(p) t < -50
constexpr double kAlphaFactor = 0.9;
constexpr double kHorizonCap = 1e6;      // T <= kHorizonCap / alpha

// Transition matrix and interval-integral row for one step length.
struct StepOps {
    Matrix transition;
    RowVector integral;
};

class ImpulseIntegrator {
public:
    ImpulseIntegrator(const Matrix& a, const Vector& b, const RowVector& c, std::span<const Complex> poles)
        : a_(a), b_(b), c_(c), poles_(poles.begin(), poles.end()) {
        const Vector d = balance(a_);
        b_ = b_.cwiseQuotient(d);
        c_ = c_.cwiseProduct(d.transpose());
        n_ = a_.rows();
        augmented_ = Matrix::Zero(n_ + 1, n_ + 1);
        augmented_.topLeftCorner(n_, n_) = a_;
        augmented_.bottomLeftCorner(1, n_) = c_;

        double fastest = 0.0;
        double slowest_re = std::numeric_limits<double>::infinity();
        for (const Complex& p : poles_) {
            fastest = std::max(fastest, std::abs(p));
            slowest_re = std::min(slowest_re, -p.real());
        }
        alpha_ = kAlphaFactor * slowest_re;
        base_step_ = kStepFraction / fastest;

        Eigen::EigenSolver<Matrix> es(a_);
        if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "modal decomposition failed");
        modes_ = es.eigenvalues();
        const Eigen::MatrixXcd v = es.eigenvectors();
        modal_lu_.compute(v);
        output_modes_ = c_.cast<Complex>() * v;
        std::vector<Complex> ev(modes_.data(), modes_.data() + modes_.size());
        for (Eigen::Index i = 0; i < modes_.size(); ++i) {
            int mult = 0;
            for (const Complex& e : ev) {
                if (std::abs(e - modes_(i)) <= 1e-6 * std::max(1.0, std::abs(modes_(i)))) ++mult;
            }
            multiplicity_.push_back(mult);
        }
    }

    NormResult run(double tol) {
        NormResult res;
        res.tolerance = tol;
        Vector x = b_;
        double t = 0.0;
        double acc = 0.0;
        double y = c_.dot(x);
        const double check_every = 0.25 / alpha_;
        double next_check = std::min(check_every, 50.0 * base_step_);
        const double horizon = kHorizonCap / alpha_;

        while (true) {
            if (t >= next_check) {
                const double tail = tail_bound(x, t);
                if (tail <= tol) {
                    res.value = acc;
                    res.truncation_time = t;
                    res.tail_bound = tail;
                    return res;
                }
                next_check = t + check_every;
            }
            if (t > horizon) {
                throw Error(ErrorCode::TailBoundFailure, "impulse response tail not certified before 1e6/alpha");
            }
            const int level = step_level(t);
            const StepOps& ops = step_ops(level);
            const double h = std::ldexp(base_step_, level);
            Vector x_next = ops.transition * x;
            const double y_next = c_.dot(x_next);
            const double whole = ops.integral.dot(x);
            if ((y < 0.0 && y_next > 0.0) || (y > 0.0 && y_next < 0.0)) {
                const double theta = crossing(x, x_next, y, y_next, h);
                const double part = integral_over(theta).dot(x);
                acc += std::abs(part) + std::abs(whole - part);
            } else {
                acc += std::abs(whole);
            }
            x = std::move(x_next);
            y = y_next;
            t += h;
        }
    }

private:
    int step_level(double t) const {
        double fastest_live = 0.0;
        double slowest = std::numeric_limits<double>::infinity();
        for (const Complex& p : poles_) {
            const double mag = std::abs(p);
            if (-p.real() * t < kDeadDecades) fastest_live = std::max(fastest_live, mag);
            slowest = std::min(slowest, mag);
        }
        if (fastest_live == 0.0) fastest_live = slowest;
        const double target = kStepFraction / fastest_live;
        return std::max(0, static_cast<int>(std::floor(std::log2(target / base_step_) + 1e-12)));
    }

    const StepOps& step_ops(int level) {
        auto it = cache_.find(level);
        if (it != cache_.end()) return it->second;
        const Matrix e = (augmented_ * std::ldexp(base_step_, level)).exp();
        StepOps ops{e.topLeftCorner(n_, n_), e.bottomLeftCorner(1, n_)};
        return cache_.emplace(level, std::move(ops)).first->second;
    }

    RowVector integral_over(double theta) const {
        const Matrix e = (augmented_ * theta).exp();
        return e.bottomLeftCorner(1, n_);
    }

    // Zero of the cubic Hermite interpolant of y on [0, h].
    double crossing(const Vector& x0, const Vector& x1, double y0, double y1, double h) const {
        const double m0 = c_.dot(a_ * x0) * h;
        const double m1 = c_.dot(a_ * x1) * h;
        auto hermite = [&](double s) {
            const double s2 = s * s;
            const double s3 = s2 * s;
            return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
        };
        double lo = 0.0;
        double hi = 1.0;
        double flo = y0;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double fm = hermite(mid);
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi) * h;
    }

    double tail_bound(const Vector& x, double t) const {
        const Eigen::VectorXcd coef = modal_lu_.solve(x.cast<Complex>());
        double bound = 0.0;
        for (Eigen::Index i = 0; i < modes_.size(); ++i) {
            const double decay = -modes_(i).real();
            const double weight = std::abs(output_modes_(i) * coef(i));
            if (weight == 0.0) continue;
            if (!(decay > 0.0)) return std::numeric_limits<double>::infinity();
            const int m = multiplicity_[static_cast<std::size_t>(i)];
            if (m > 1) {
                bound += weight * std::pow(1.0 + alpha_ * t, m - 1) / (kAlphaFactor * decay);
            } else {
                bound += weight / decay;
            }
        }
        return std::isfinite(bound) ? bound : std::numeric_limits<double>::infinity();
    }

    Matrix a_;
    Vector b_;
    RowVector c_;
    std::vector<Complex> poles_;
    Eigen::Index n_ = 0;
    Matrix augmented_;
    double alpha_ = 0.0;
    double base_step_ = 0.0;
    Eigen::VectorXcd modes_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> modal_lu_;
    Eigen::RowVectorXcd output_modes_;
    std::vector<int> multiplicity_;
    std::map<int, StepOps> cache_;
};

NormResult integrate_output(const StateSpace& ss, Eigen::Index row, std::span<const Complex> poles, double tol) {
    const double direct = std::abs(ss.D(row));
    if (ss.order() == 0 || ss.C.row(row).isZero(0.0)) {
        return {direct, 0.0, 0.0, tol};
    }
    ImpulseIntegrator integ(ss.A, ss.B, ss.C.row(row), poles);
    NormResult r = integ.run(tol);
    r.value += direct;
    return r;
}

void require_tol(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorCode::InvalidArgument, "norm tolerance must be positive");
}

}  // namespace

NormResult l1_norm(const RationalTf& tf, std::span<const Complex> poles, double tol) {
    require_tol(tol);
    if (!all_in_left_half_plane({poles.begin(), poles.end()})) {
        throw Error(ErrorCode::NotHurwitz, "transfer function has a pole with nonnegative real part");
    }
    const StateSpace ss = tf_to_statespace(tf);
    return integrate_output(ss, 0, poles, tol);
}

NormResult l1_norm(const RationalTf& tf, double tol) {
    if (!tf.is_proper()) throw Error(ErrorCode::ImproperTf, "numerator degree exceeds denominator degree");
    if (tf.den().degree() == 0) {
        require_tol(tol);
        return {std::abs(tf.num()[0]), 0.0, 0.0, tol};
    }
    const std::vector<Complex> poles = poly_roots(tf.den());
    return l1_norm(tf, poles, tol);
}

NormResult l1_norm_vector(const RationalTfVector& v, double tol) {
    if (v.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty transfer-function vector");
    NormResult out{0.0, 0.0, 0.0, tol};
    for (const RationalTf& e : v.entries) {
        const NormResult r = l1_norm(e, tol);
        out.value = std::max(out.value, r.value);
        out.truncation_time = std::max(out.truncation_time, r.truncation_time);
        out.tail_bound = std::max(out.tail_bound, r.tail_bound);
    }
    return out;
}

std::vector<NormResult> impulse_l1_outputs(const StateSpace& ss, double tol) {
    require_tol(tol);
    const std::vector<Complex> poles = eigenvalues(ss.A);
    if (!all_in_left_half_plane(poles)) throw Error(ErrorCode::NotHurwitz, "state matrix is not Hurwitz");
    std::vector<NormResult> out;
    for (Eigen::Index r = 0; r < ss.outputs(); ++r) out.push_back(integrate_output(ss, r, poles, tol));
    return out;
}

}  // namespace delayctl
