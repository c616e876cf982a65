#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace delayctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;

/// True when every entry is finite.
bool all_finite(const Matrix& m);

/// Max-abs entry norm.
double max_abs(const Matrix& m);

/// Matrix exponential by scaling and squaring.
Matrix expm(const Matrix& a);

/**
 * @brief Diagonal similarity balancing (Parlett-Reinsch, powers of two).
 *
 * Returns the scaling vector d such that diag(d)^-1 * A * diag(d) has
 * row and column norms of comparable size. A is balanced in place.
 */
Vector balance(Matrix& a);

/// Extremal eigenvalues of a symmetric matrix.
struct SymmetricSpectrum {
    double min;
    double max;
};
SymmetricSpectrum symmetric_spectrum(const Matrix& s);

/// Leading principal minors, smallest first.
std::vector<double> leading_principal_minors(const Matrix& m);

}  // namespace delayctl
