#ifndef STEIN_MALLIAVIN_HPP
#define STEIN_MALLIAVIN_HPP

#include "stein/hermite.hpp"
#include "stein/poly.hpp"

namespace stein {

enum class GammaVariant { standard, modified };

// Target random variable Y = h(X_1,...,X_d). The solver and the operator
// algebra work with the centered polynomial h (one constant subtracted so
// E[h(X)] = 0); the raw polynomial and the shift are kept so coefficient
// polynomials can always be stated in terms of the target value as given.
struct TargetSpec {
    int d = 1;
    Poly h_raw{1};
    Rational centered_shift;
    Poly h{1};        // centered: h_raw - centered_shift
    PolyVector grad;  // gradient of h (equals gradient of h_raw)

    explicit TargetSpec(const Poly& target) : d(target.nvars()), h_raw(target), h(target.nvars()) {
        centered_shift = expect(target);
        h = target - Poly::constant(d, centered_shift);
        grad = PolyVector(d, d);
        for (int k = 0; k < d; ++k) grad[static_cast<size_t>(k)] = h.partial(k);
    }

    int degree() const {
        auto dg = h.degree();
        return dg ? *dg : 0;
    }
    // p(h_raw(x)): embeds a polynomial in the target value into K[x].
    Poly embed(const Poly& p_in_y) const { return compose_univariate(p_in_y, h_raw); }
    // p(h(x)) for the centered target.
    Poly embed_centered(const Poly& p_in_y) const { return compose_univariate(p_in_y, h); }
};

// Divergence: delta f = sum_k (x_k f_k - d/dx_k f_k).
Poly delta(const PolyVector& f);

// Right inverse of delta up to centering: delta(pseudo_inverse(p)) = p - E[p].
// Univariate inputs use the direct monomial recursion; multivariate inputs
// route through the Hermite expansion.
PolyVector pseudo_inverse(const Poly& p);

// The subset-decomposition pseudo-inverse; satisfies the same contract and
// coincides with pseudo_inverse on univariate polynomials.
PolyVector modified_pseudo_inverse(const Poly& p);

// One inclusion-exclusion term of modified_pseudo_inverse: the contribution
// of the coordinate subset A (bitmask over variables) for a single monomial.
// Exposed for the fixture tests.
PolyVector modified_pseudo_inverse_subset_term(const MultiIndex& alpha, const Rational& coeff, unsigned subset_mask);

// Ornstein-Uhlenbeck inverse: scales the H_alpha component by -1/|alpha|,
// annihilating constants.
Poly ou_inverse(const Poly& p);

// Gamma operator: inner product of grad h with the chosen pseudo-inverse of f.
Poly gamma(const TargetSpec& target, const Poly& f, GammaVariant variant = GammaVariant::standard);

// Iterated Gamma: r-fold application of gamma starting from the centered
// target polynomial itself (r = 0 returns it unchanged).
Poly gamma_iter(const TargetSpec& target, unsigned r);

// Gamma-independent oracle for E[gamma^t applied to p(Y)], computed from
// moments alone:  G(t) = Cov(p(Y), Y^t)/t! - sum_{s<t} G(s) E[Y^{t-s}]/(t-s)!.
Rational gamma_moment_oracle(const TargetSpec& target, unsigned t, const Poly& p_in_y);

}  // namespace stein

#endif
