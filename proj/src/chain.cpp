#include "stein/chain.hpp"

#include <cmath>
#include <stdexcept>

#include "stein/hermite.hpp"
#include "stein/numeric.hpp"

namespace stein {

namespace {

int udeg(const Poly& p) {
    auto d = p.degree();
    return d ? *d : -1;
}

Rational lead_coeff(const Poly& p) {
    return p.dense_coeffs().back();
}

Rational rational_pow(const Rational& base, int e) {
    Rational out(1);
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

// resultant of univariate f and g by the Euclidean recursion:
// Res(f,g) = (-1)^{deg f deg g} lc(g)^{deg f - deg r} Res(g, r), r = f mod g
Rational resultant(const Poly& f, const Poly& g) {
    if (f.is_zero() || g.is_zero()) return Rational(0);
    int df = udeg(f), dg = udeg(g);
    if (df < dg) {
        Rational sign((df % 2 == 1 && dg % 2 == 1) ? -1 : 1);
        return sign * resultant(g, f);
    }
    if (dg == 0) return rational_pow(g.constant_term(), df);
    auto [q, r] = divide_univariate(f, g);
    if (r.is_zero()) return Rational(0);
    Rational sign((df % 2 == 1 && dg % 2 == 1) ? -1 : 1);
    return sign * rational_pow(lead_coeff(g), df - udeg(r)) * resultant(g, r);
}

Poly gcd_univariate(Poly a, Poly b) {
    while (!b.is_zero()) {
        auto [q, r] = divide_univariate(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * lead_coeff(a).inverse();  // monic
}

Poly derivative_y(const Poly& p) { return p.partial(0); }

Poly lagrange_interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    Poly acc(1);
    Poly yvar = Poly::variable(1, 0);
    for (size_t i = 0; i < xs.size(); ++i) {
        Poly term = Poly::constant(1, ys[i]);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            Poly factor = yvar - Poly::constant(1, xs[j]);
            term = term * factor * Poly::constant(1, (xs[i] - xs[j]).inverse());
        }
        acc += term;
    }
    return acc;
}

}  // namespace

SteinOperator::SteinOperator(TargetSpec t, std::vector<Poly> p, Provenance prov)
    : target(std::move(t)), coeffs(std::move(p)), provenance(prov) {
    if (coeffs.size() < 2) throw std::invalid_argument("operator needs order at least 1");
    if (coeffs.back().is_zero()) throw std::invalid_argument("top coefficient must be nonzero");
    for (const auto& c : coeffs)
        if (c.nvars() != 1) throw std::invalid_argument("coefficients must be univariate in y");
}

int SteinOperator::max_degree() const {
    int m = 0;
    for (const auto& c : coeffs) m = std::max(m, udeg(c));
    return m;
}

ChainTrace forward_replay(const SteinOperator& op, GammaVariant variant) {
    const TargetSpec& tg = op.target;
    ChainTrace tr;
    int T = op.order();
    tr.g.push_back(Poly(tg.d));  // g_0 = 0
    for (int t = 1; t <= T; ++t) {
        Poly prev = tr.g.back() + tg.embed(op.coeffs[static_cast<size_t>(t - 1)]);
        tr.g.push_back(gamma(tg, prev, variant));
    }
    tr.residual = tr.g.back() + tg.embed(op.coeffs.back());
    for (int t = 0; t <= T; ++t) {
        tr.moment_defects.push_back(expect(tr.g[static_cast<size_t>(t)]) +
                                    expect(tg.embed(op.coeffs[static_cast<size_t>(t)])));
    }
    return tr;
}

std::vector<Rational> pairing_defects(const SteinOperator& op, int s_max) {
    const TargetSpec& tg = op.target;
    int T = op.order();
    std::vector<Poly> ypow;  // h_raw^j
    ypow.push_back(Poly::constant(tg.d, Rational(1)));
    for (int j = 1; j <= s_max; ++j) ypow.push_back(ypow.back() * tg.h_raw);
    std::vector<Poly> embedded;
    for (const auto& c : op.coeffs) embedded.push_back(tg.embed(c));

    std::vector<Rational> defects;
    for (int s = 0; s <= s_max; ++s) {
        Rational acc(0);
        Rational falling(1);  // s!/(s-t)!
        for (int t = 0; t <= std::min(s, T); ++t) {
            if (t > 0) falling *= Rational(static_cast<long>(s - t + 1));
            acc += falling * expect(embedded[static_cast<size_t>(t)] * ypow[static_cast<size_t>(s - t)]);
        }
        defects.push_back(std::move(acc));
    }
    return defects;
}

std::vector<Rational> moment_conditions(const SteinOperator& op, int s_max) {
    if (s_max < op.order()) throw std::invalid_argument("moment_conditions: s_max must cover the order");
    return pairing_defects(op, s_max);
}

std::pair<Poly, Poly> divide_univariate(const Poly& p, const Poly& d) {
    if (p.nvars() != 1 || d.nvars() != 1) throw std::invalid_argument("divide_univariate: univariate only");
    if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
    Poly q(1), r = p;
    int dd = udeg(d);
    Rational dl = lead_coeff(d);
    while (!r.is_zero() && udeg(r) >= dd) {
        int dr = udeg(r);
        Rational f = lead_coeff(r) / dl;
        Poly mono = Poly::monomial(MultiIndex({static_cast<unsigned>(dr - dd)}), f);
        q += mono;
        r -= mono * d;
    }
    return {q, r};
}

BackwardReport backward_validate(const SteinOperator& op) {
    BackwardReport rep;
    const TargetSpec& tg = op.target;
    if (tg.d != 1) {
        rep.message = "backward validation is defined for univariate targets";
        return rep;
    }
    int T = op.order();
    Poly hp = tg.h_raw.partial(0);
    auto [q, r] = divide_univariate(-tg.embed(op.coeffs.back()), hp);
    if (!r.is_zero()) {
        rep.failed_stage = 0;
        rep.message = "top coefficient is not divisible by h'";
        return rep;
    }
    rep.divisors.push_back(q);
    for (int t = T; t >= 2; --t) {
        PolyVector v(1, 1);
        v[0] = rep.divisors.back();
        Poly w = delta(v) - tg.embed(op.coeffs[static_cast<size_t>(t - 1)]);
        auto [q2, r2] = divide_univariate(w, hp);
        if (!r2.is_zero()) {
            rep.failed_stage = T - t + 1;
            rep.message = "chain step left a nonzero remainder";
            return rep;
        }
        rep.divisors.push_back(q2);
    }
    PolyVector v(1, 1);
    v[0] = rep.divisors.back();
    if (delta(v) != tg.embed(op.coeffs.front())) {
        rep.failed_stage = T;
        rep.message = "final divergence does not match the zero-order coefficient";
        return rep;
    }
    rep.ok = true;
    return rep;
}

TopCoefficientReport top_coefficient_check(const SteinOperator& op, double tol) {
    TopCoefficientReport rep;
    const TargetSpec& tg = op.target;
    if (tg.d != 1) return rep;
    int p = tg.degree();
    if (p < 2 || tg.h_raw != hermite(static_cast<unsigned>(p))) return rep;
    rep.applicable = true;
    rep.p = p;
    rep.required_degree = (p % 2 == 0) ? p / 2 : p - 1;
    rep.actual_degree = udeg(op.coeffs.back());
    rep.degree_ok = rep.actual_degree >= rep.required_degree;

    // numeric route: critical points of H_p are the roots of H_{p-1}
    std::vector<double> roots = hermite_roots(static_cast<unsigned>(p - 1));
    const Poly& pT = op.coeffs.back();
    double scale = 0.0;
    for (const auto& [m, c] : pT.terms()) scale = std::max(scale, std::fabs(c.to_double()));
    double worst = 0.0;
    for (double z : roots) {
        double crit = tg.h_raw.eval_double({z});
        worst = std::max(worst, std::fabs(pT.eval_double({crit})));
    }
    rep.numeric_max = worst;
    rep.numeric_ok = worst <= tol * scale;

    if (p <= 6) {
        rep.exact_checked = true;
        // resultant of H_p'(x) and y - H_p(x) in y, by evaluation and
        // interpolation; degree p-1 in y
        Poly hp = tg.h_raw.partial(0);
        std::vector<Rational> xs, ys;
        for (int i = 0; i < p; ++i) {
            Rational y0(static_cast<long>(i));
            Poly g = Poly::constant(1, y0) - tg.h_raw;
            xs.push_back(y0);
            ys.push_back(resultant(hp, g));
        }
        Poly res = lagrange_interpolate(xs, ys);
        Poly common = gcd_univariate(res, derivative_y(res));
        Poly radical = divide_univariate(res, common).first;
        rep.critical_value_poly = radical * lead_coeff(radical).inverse();  // monic
        rep.exact_divisible = divide_univariate(pT, rep.critical_value_poly).second.is_zero();
    }
    return rep;
}

}  // namespace stein
