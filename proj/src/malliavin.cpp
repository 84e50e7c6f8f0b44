#include "stein/malliavin.hpp"

#include <stdexcept>

namespace stein {

namespace {

// delta^{-1} x^n = x^{n-1} + (n-1) delta^{-1} x^{n-2}; coefficient of
// x^{n-1-2k} is (n-1)!!/(n-1-2k)!!.
void univariate_pseudo_inverse_monomial(unsigned n, const Rational& c, Poly& out) {
    if (n == 0) return;
    Rational f = c;
    for (unsigned deg = n - 1;; deg -= 2) {
        out.add_term(MultiIndex({deg}), f);
        if (deg < 2) break;
        f *= Rational(static_cast<long>(deg));
    }
}

Poly univariate_pseudo_inverse(const Poly& p) {
    Poly out(1);
    for (const auto& [m, c] : p.terms()) univariate_pseudo_inverse_monomial(m.e[0], c, out);
    return out;
}

}  // namespace

Poly delta(const PolyVector& f) {
    if (f.size() == 0) throw std::invalid_argument("delta: empty polynomial vector");
    int nv = f[0].nvars();
    Poly out(nv);
    for (size_t k = 0; k < f.size(); ++k) {
        out += Poly::variable(nv, static_cast<int>(k)) * f[k] - f[k].partial(static_cast<int>(k));
    }
    return out;
}

PolyVector pseudo_inverse(const Poly& p) {
    int d = p.nvars();
    PolyVector out(d, d);
    if (d == 1) {
        out[0] = univariate_pseudo_inverse(p);
        return out;
    }
    HermiteExpansion e = to_hermite(p);
    std::vector<HermiteExpansion> comps(static_cast<size_t>(d));
    for (auto& c : comps) c.nvars = d;
    for (const auto& [alpha, c] : e.terms) {
        unsigned order = alpha.total();
        if (order == 0) continue;
        for (size_t k = 0; k < alpha.size(); ++k) {
            if (alpha.e[k] == 0) continue;
            MultiIndex down = alpha;
            down.e[k] -= 1;
            comps[k].add_term(std::move(down),
                              c * Rational(static_cast<long>(alpha.e[k]), static_cast<unsigned long>(order)));
        }
    }
    for (int k = 0; k < d; ++k) out[static_cast<size_t>(k)] = from_hermite(comps[static_cast<size_t>(k)]);
    return out;
}

PolyVector modified_pseudo_inverse_subset_term(const MultiIndex& alpha, const Rational& coeff, unsigned subset_mask) {
    int d = static_cast<int>(alpha.size());
    PolyVector out(d, d);
    if (subset_mask == 0) return out;

    // prefactor: product of E[X_k^{alpha_k}] over k outside the subset
    Rational pre = coeff;
    for (int k = 0; k < d; ++k) {
        if (subset_mask & (1u << k)) continue;
        pre *= gaussian_moment(alpha.e[static_cast<size_t>(k)]);
        if (pre.is_zero()) return out;
    }
    unsigned weight = 0;
    for (int k = 0; k < d; ++k)
        if (subset_mask & (1u << k)) weight += alpha.e[static_cast<size_t>(k)];
    if (weight == 0) return out;  // all exponents in the subset vanish

    for (int k = 0; k < d; ++k) {
        if (!(subset_mask & (1u << k)) || alpha.e[static_cast<size_t>(k)] == 0) continue;
        // centered factors for the other subset coordinates
        Poly factor = Poly::constant(d, pre * Rational(static_cast<long>(alpha.e[static_cast<size_t>(k)]),
                                                       static_cast<unsigned long>(weight)));
        for (int j = 0; j < d; ++j) {
            if (j == k || !(subset_mask & (1u << j))) continue;
            unsigned ej = alpha.e[static_cast<size_t>(j)];
            Poly centered(d);
            centered.add_term(MultiIndex::unit(d, j, ej), Rational(1));
            centered.add_term(MultiIndex::zeros(d), -gaussian_moment(ej));
            factor = factor * centered;
        }
        // univariate pseudo-inverse of x_k^{alpha_k}, placed in variable k
        Poly uni(1);
        univariate_pseudo_inverse_monomial(alpha.e[static_cast<size_t>(k)], Rational(1), uni);
        Poly placed(d);
        for (const auto& [m, c] : uni.terms()) placed.add_term(MultiIndex::unit(d, k, m.e[0]), c);
        out[static_cast<size_t>(k)] += factor * placed;
    }
    return out;
}

PolyVector modified_pseudo_inverse(const Poly& p) {
    int d = p.nvars();
    if (d == 1) return pseudo_inverse(p);
    if (d > 16) throw std::invalid_argument("modified pseudo-inverse: dimension too large");
    PolyVector out(d, d);
    for (const auto& [alpha, c] : p.terms()) {
        unsigned support = 0;
        for (int k = 0; k < d; ++k)
            if (alpha.e[static_cast<size_t>(k)] > 0) support |= 1u << k;
        // subsets outside the support contribute nothing (x^0 - E[X^0] = 0)
        for (unsigned mask = support; mask != 0; mask = (mask - 1) & support) {
            PolyVector term = modified_pseudo_inverse_subset_term(alpha, c, mask);
            for (int k = 0; k < d; ++k) out[static_cast<size_t>(k)] += term[static_cast<size_t>(k)];
        }
    }
    return out;
}

Poly ou_inverse(const Poly& p) {
    HermiteExpansion e = to_hermite(p);
    HermiteExpansion scaled;
    scaled.nvars = e.nvars;
    for (const auto& [alpha, c] : e.terms) {
        unsigned order = alpha.total();
        if (order == 0) continue;
        scaled.add_term(alpha, -c / Rational(static_cast<long>(order)));
    }
    return from_hermite(scaled);
}

Poly gamma(const TargetSpec& target, const Poly& f, GammaVariant variant) {
    if (f.nvars() != target.d) throw std::invalid_argument("gamma: variable-count mismatch");
    PolyVector v = variant == GammaVariant::standard ? pseudo_inverse(f) : modified_pseudo_inverse(f);
    Poly out(target.d);
    for (size_t k = 0; k < v.size(); ++k) out += target.grad[k] * v[k];
    return out;
}

Poly gamma_iter(const TargetSpec& target, unsigned r) {
    Poly g = target.h;
    for (unsigned i = 0; i < r; ++i) g = gamma(target, g);
    return g;
}

Rational gamma_moment_oracle(const TargetSpec& target, unsigned t, const Poly& p_in_y) {
    Poly p_of_x = target.embed(p_in_y);
    Rational ep = expect(p_of_x);
    std::vector<Rational> g(t + 1, Rational(0));
    Poly ypow = Poly::constant(target.d, Rational(1));
    std::vector<Rational> ymom(t + 1, Rational(1));  // E[Y^s] of the centered target
    std::vector<Rational> cov(t + 1, Rational(0));   // Cov(p(Y), Y^s)
    for (unsigned s = 1; s <= t; ++s) {
        ypow = ypow * target.h;
        ymom[s] = expect(ypow);
        cov[s] = expect(p_of_x * ypow) - ep * ymom[s];
    }
    for (unsigned s = 1; s <= t; ++s) {
        Rational v = cov[s] / Rational::factorial(s);
        for (unsigned j = 1; j < s; ++j) v -= g[j] * ymom[s - j] / Rational::factorial(s - j);
        g[s] = v;
    }
    return t == 0 ? ep : g[t];
}

}  // namespace stein
