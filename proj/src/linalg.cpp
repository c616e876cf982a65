#include "delayctl/linalg.hpp"

#include "delayctl/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace delayctl {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ImproperTf: return "ImproperTf";
    case ErrorCode::TailBoundFailure: return "TailBoundFailure";
    case ErrorCode::StabilityLost: return "StabilityLost";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::StartNotConverged: return "StartNotConverged";
    case ErrorCode::ConditionViolatedAtZero: return "ConditionViolatedAtZero";
    case ErrorCode::ConditionViolatedOnIdentity: return "ConditionViolatedOnIdentity";
    case ErrorCode::NoRootInRange: return "NoRootInRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix expm(const Matrix& a) {
    if (a.size() == 0) return a;
    return a.exp();
}

Vector balance(Matrix& a) {
    const Eigen::Index n = a.rows();
    Vector d = Vector::Ones(n);
    constexpr double radix = 2.0;
    constexpr double radix2 = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix2;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                d(i) *= f;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
    return d;
}

SymmetricSpectrum symmetric_spectrum(const Matrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "symmetric eigenvalue solve failed");
    }
    return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

std::vector<double> leading_principal_minors(const Matrix& m) {
    std::vector<double> minors;
    for (Eigen::Index k = 1; k <= m.rows(); ++k) {
        minors.push_back(m.topLeftCorner(k, k).determinant());
    }
    return minors;
}

}  // namespace delayctl
