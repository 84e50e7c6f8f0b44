#ifndef STEIN_LINALG_HPP
#define STEIN_LINALG_HPP

#include <cstddef>
#include <vector>

#include "stein/rational.hpp"

namespace stein {

struct RationalMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Rational> a;  // row-major

    RationalMatrix() = default;
    RationalMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
    Rational& at(size_t r, size_t c) { return a[r * cols + c]; }
    const Rational& at(size_t r, size_t c) const { return a[r * cols + c]; }
};

struct SolveOutcome {
    bool solvable = false;
    size_t rank = 0;
    // valid when solvable: free variables set to zero
    std::vector<Rational> particular;
    // basis of the homogeneous solution space, one vector per free column,
    // ordered by free-column index
    std::vector<std::vector<Rational>> nullspace;
};

// Exact solution of A u = b over the rationals: fraction-free forward
// elimination with content reduction, exact back-substitution to reduced
// echelon form, deterministic pivot order (leftmost column, then first
// remaining row). Independent row/column blocks are detected and eliminated
// separately; the result is identical to a monolithic elimination.
SolveOutcome solve_exact(const RationalMatrix& A, const std::vector<Rational>& b, bool want_nullspace = true);

// Nullspace basis of A (same conventions).
std::vector<std::vector<Rational>> kernel(const RationalMatrix& A);

}  // namespace stein

#endif
