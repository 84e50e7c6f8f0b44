#ifndef STEIN_NUMERIC_HPP
#define STEIN_NUMERIC_HPP

#include <vector>

namespace stein {

// Roots of the probabilists' Hermite polynomial H_n, ascending; eigenvalues
// of the symmetric tridiagonal Jacobi matrix with offdiagonals sqrt(k).
std::vector<double> hermite_roots(unsigned n);

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // sum to 1
};

// Gauss-Hermite rule for the standard Gaussian weight exp(-x^2/2)/sqrt(2*pi):
// exact for polynomials of degree <= 2n-1.
Quadrature gauss_hermite(unsigned n);

// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
Quadrature gauss_legendre(unsigned n);

}  // namespace stein

#endif
