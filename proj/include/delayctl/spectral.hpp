#pragma once

#include "delayctl/linalg.hpp"
#include "delayctl/polynomial.hpp"

#include <vector>

namespace delayctl {

/**
 * @brief Leverrier-Faddeev expansion of the resolvent (sI - A)^-1.
 *
 * adj(sI - A) = sum_{k=0}^{n-1} adjugate[k] * s^(n-1-k) and
 * det(sI - A) = char_poly (monic, ascending coefficients).
 */
struct ResolventExpansion {
    Polynomial char_poly;
    std::vector<Matrix> adjugate;
};

ResolventExpansion leverrier_faddeev(const Matrix& a);

/// Eigenvalues as roots of the characteristic polynomial.
std::vector<Complex> eigenvalues(const Matrix& a);

bool is_hurwitz(const Matrix& a);

}  // namespace delayctl
