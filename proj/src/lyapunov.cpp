#include "delayctl/lyapunov.hpp"

#include "delayctl/error.hpp"
#include "delayctl/roots.hpp"
#include "delayctl/spectral.hpp"

#include <cmath>

namespace delayctl {

ResolventExpansion leverrier_faddeev(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::InvalidArgument, "leverrier_faddeev needs a square matrix");
    const Eigen::Index n = a.rows();
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    ResolventExpansion out;
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * Matrix::Identity(n, n);
        out.adjugate.push_back(m);
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    out.char_poly = Polynomial(std::move(c));
    return out;
}

std::vector<Complex> eigenvalues(const Matrix& a) {
    if (a.rows() == 0) return {};
    return poly_roots(leverrier_faddeev(a).char_poly);
}

bool is_hurwitz(const Matrix& a) { return all_in_left_half_plane(eigenvalues(a)); }

Matrix solve_lyapunov(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw Error(ErrorCode::InvalidArgument, "solve_lyapunov needs a nonempty square matrix");
    }
    if (!is_hurwitz(a)) throw Error(ErrorCode::NotHurwitz, "A_sp has an eigenvalue with nonnegative real part");

    const Eigen::Index n = a.rows();
    const Eigen::Index m = n * (n + 1) / 2;
    // packed index of P(i, j), i <= j
    auto idx = [n](Eigen::Index i, Eigen::Index j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    };

    Matrix sys = Matrix::Zero(m, m);
    Vector rhs = Vector::Zero(m);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const Eigen::Index row = idx(i, j);
            // (A^T P)_ij + (P A)_ij = sum_k A_ki P_kj + P_ik A_kj
            for (Eigen::Index k = 0; k < n; ++k) {
                sys(row, idx(k, j)) += a(k, i);
                sys(row, idx(i, k)) += a(k, j);
            }
            rhs(row) = (i == j) ? -1.0 : 0.0;
        }
    }

    Eigen::FullPivLU<Matrix> lu(sys);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
        throw Error(ErrorCode::SingularSystem, "vectorized Lyapunov system is numerically singular");
    }
    const Vector packed = lu.solve(rhs);

    Matrix p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            p(i, j) = p(j, i) = packed(idx(i, j));
        }
    }
    return p;
}

double lyapunov_residual(const Matrix& a, const Matrix& p) {
    return max_abs(a.transpose() * p + p * a + Matrix::Identity(a.rows(), a.cols()));
}

}  // namespace delayctl
