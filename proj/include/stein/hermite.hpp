#ifndef STEIN_HERMITE_HPP
#define STEIN_HERMITE_HPP

#include <map>

#include "stein/poly.hpp"

namespace stein {

// Polynomial expressed in the product-Hermite basis: terms maps a multi-index
// alpha to the coefficient of H_alpha(x) = prod_k H_{alpha_k}(x_k).
struct HermiteExpansion {
    int nvars = 1;
    std::map<MultiIndex, Rational> terms;

    Rational coeff(const MultiIndex& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? Rational(0) : it->second;
    }
    void add_term(MultiIndex m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms.try_emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
};

// Probabilists' Hermite polynomial H_n (monic), univariate.
Poly hermite(unsigned n);

// Exact change of basis; from_hermite(to_hermite(p)) == p.
HermiteExpansion to_hermite(const Poly& p);
Poly from_hermite(const HermiteExpansion& e);

// E[X^n] for X ~ N(0,1): (n-1)!! for even n, 0 for odd n.
Rational gaussian_moment(unsigned n);

// E[p(X_1,...,X_d)] with i.i.d. standard Gaussian coordinates.
Rational expect(const Poly& p);

// Same expectation through the Hermite coefficient of H_0; used as the
// independent cross-check of expect().
Rational expect_hermite_route(const Poly& p);

// n-th cumulant of h(X), from the exact moments E[h(X)^j], j <= n, via the
// moment-to-cumulant recursion.
Rational cumulant(const Poly& h, unsigned n);

}  // namespace stein

#endif
