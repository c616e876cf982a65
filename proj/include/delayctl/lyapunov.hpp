#pragma once

#include "delayctl/linalg.hpp"

namespace delayctl {

/**
 * @brief Solves A^T P + P A = -I for symmetric P.
 *
 * The n(n+1)/2 independent entries of P are obtained from one dense linear
 * solve. Throws Error(NotHurwitz) when A has an eigenvalue with nonnegative
 * real part and Error(SingularSystem) when the reduced system is singular.
 */
Matrix solve_lyapunov(const Matrix& a);

/// max |A^T P + P A + I|.
double lyapunov_residual(const Matrix& a, const Matrix& p);

}  // namespace delayctl
