#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "stein/chain.hpp"
#include "stein/hermite.hpp"
#include "stein/malliavin.hpp"

using namespace stein;
using namespace stein::testing;

namespace {

PolyVector vec1(const Poly& p) {
    PolyVector v(1, 1);
    v[0] = p;
    return v;
}

}  // namespace

TEST_CASE("divergence") {
    for (unsigned n = 0; n <= 6; ++n) {
        Poly xn(1);
        xn.add_term(MultiIndex({n}), Rational(1));
        Poly want(1);
        want.add_term(MultiIndex({n + 1}), Rational(1));
        if (n >= 1) want.add_term(MultiIndex({n - 1}), Rational(-static_cast<long>(n)));
        CHECK(delta(vec1(xn)) == want);
    }
    CHECK(delta(vec1(xp("1"))) == xp("x"));
    for (unsigned n = 1; n <= 8; ++n) CHECK(delta(vec1(hermite(n - 1))) == hermite(n));
}

TEST_CASE("pseudo-inverse, univariate") {
    CHECK(pseudo_inverse(xp("x^2"))[0] == xp("x"));
    CHECK(pseudo_inverse(xp("x^3"))[0] == xp("x^2+2"));
    CHECK(pseudo_inverse(xp("5"))[0].is_zero());
    for (unsigned n = 0; n <= 12; ++n) {
        Poly xn(1);
        xn.add_term(MultiIndex({n}), Rational(1));
        CHECK(pseudo_inverse(delta(vec1(xn)))[0] == xn);
    }
}

TEST_CASE("pseudo-inverse, spectral route") {
    // delta^{-1}(x1^3 x2^2), both components in the Hermite basis
    PolyVector v = pseudo_inverse(xp("x1^3*x2^2", 2));
    Poly h2a = xp("x1^2-1", 2), h2b = xp("x2^2-1", 2);
    Poly want0 = Rational(3, 5) * h2a * h2b + h2a + h2b + xp("3", 2);
    Poly want1 = Rational(2, 5) * xp("x1^3-3*x1", 2) * xp("x2", 2) + Rational(2) * xp("x1*x2", 2);
    CHECK(v[0] == want0);
    CHECK(v[1] == want1);
}

TEST_CASE("modified pseudo-inverse") {
    // the full subset decomposition of x1^3 x2^2: the two-coordinate term is
    // the printed pair, the single-coordinate term adds (H2(x1) + 3, 0)
    Poly h2a = xp("x1^2-1", 2), h2b = xp("x2^2-1", 2);
    Poly printed0 = Rational(3, 5) * h2a * h2b + Rational(9, 5) * h2b;
    Poly printed1 = Rational(2, 5) * xp("x1^3-3*x1", 2) * xp("x2", 2) + Rational(6, 5) * xp("x1*x2", 2);

    PolyVector both = modified_pseudo_inverse_subset_term(MultiIndex({3, 2}), Rational(1), 0b11u);
    CHECK(both[0] == printed0);
    CHECK(both[1] == printed1);

    PolyVector full = modified_pseudo_inverse(xp("x1^3*x2^2", 2));
    CHECK(full[0] == printed0 + h2a + xp("3", 2));
    CHECK(full[1] == printed1);

    // contract held by the full vector, violated by the printed pair alone
    Poly p = xp("x1^3*x2^2", 2);
    CHECK(delta(full) == p);
    PolyVector printed(2, 2);
    printed[0] = printed0;
    printed[1] = printed1;
    CHECK(delta(printed) != p);

    CHECK(modified_pseudo_inverse(xp("7", 3))[0].is_zero());
    CHECK(modified_pseudo_inverse(xp("7", 3))[2].is_zero());
}

TEST_CASE("modified pseudo-inverse coincides with the monomial recursion for d = 1") {
    PolyGen gen(23);
    for (int i = 0; i < 20; ++i) {
        Poly p = gen.poly(1, 9);
        CHECK(modified_pseudo_inverse(p) == pseudo_inverse(p));
    }
}

TEST_CASE("pseudo-inverse contract") {
    PolyGen gen(29);
    for (int i = 0; i < 60; ++i) {
        int d = gen.integer(1, 3);
        Poly p = gen.poly(d, 8);
        Poly centered = p - Poly::constant(d, expect(p));
        CHECK(delta(pseudo_inverse(p)) == centered);
        CHECK(delta(modified_pseudo_inverse(p)) == centered);
    }
}

TEST_CASE("Ornstein-Uhlenbeck inverse") {
    CHECK(ou_inverse(hermite(4)) == Rational(-1, 4) * hermite(4));
    CHECK(ou_inverse(xp("1")).is_zero());
    CHECK(ou_inverse(xp("x^2")) == Rational(-1, 2) * xp("x^2-1"));
}

TEST_CASE("gamma operator") {
    TargetSpec h2(hermite(2));
    CHECK(gamma(h2, hermite(2)) == xp("2*x^2"));
    TargetSpec h3(hermite(3));
    CHECK(gamma(h3, hermite(3)) == xp("3*x^4-6*x^2+3"));
    CHECK(gamma(h3, xp("1")).is_zero());
    PolyGen gen(31);
    for (int i = 0; i < 10; ++i) {
        Poly f = gen.poly(1, 6);
        CHECK(gamma(h3, f + xp("5")) == gamma(h3, f));
    }
    CHECK_THROWS(gamma(h3, xp("x1*x2", 2)));
}

TEST_CASE("gamma output lies in the gradient ideal (univariate)") {
    PolyGen gen(37);
    TargetSpec h4(hermite(4));
    Poly hp = hermite(4).partial(0);
    for (int i = 0; i < 15; ++i) {
        Poly g = gamma(h4, gen.poly(1, 6));
        auto [q, r] = divide_univariate(g, hp);
        CHECK(r.is_zero());
    }
}

TEST_CASE("integration by parts, exact") {
    PolyGen gen(41);
    for (int i = 0; i < 40; ++i) {
        int d = gen.integer(1, 2);
        Poly h = gen.poly(d, 3);
        if (!h.degree() || *h.degree() < 1) continue;
        TargetSpec tg(h);
        Poly f = gen.poly(d, 4);
        Poly gp = gen.poly(1, 3);  // g, univariate in y
        Poly gprime = gp.partial(0);
        for (GammaVariant variant : {GammaVariant::standard, GammaVariant::modified}) {
            Rational lhs = expect(tg.embed(gp) * f);
            Rational rhs = expect(tg.embed(gp)) * expect(f) + expect(tg.embed(gprime) * gamma(tg, f, variant));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("gamma variants agree in pairings against the target") {
    PolyGen gen(43);
    for (int i = 0; i < 12; ++i) {
        int d = gen.integer(2, 3);
        Poly h = gen.poly(d, 2);
        if (!h.degree() || *h.degree() < 1) continue;
        TargetSpec tg(h);
        Poly f = gen.poly(d, 4);
        Poly gs = gamma(tg, f, GammaVariant::standard);
        Poly gm = gamma(tg, f, GammaVariant::modified);
        Poly ypow = Poly::constant(d, Rational(1));
        for (int j = 0; j <= 8; ++j) {
            CHECK(expect(ypow * gs) == expect(ypow * gm));
            ypow = ypow * tg.h;
        }
    }
}

TEST_CASE("iterated gamma") {
    TargetSpec h3(hermite(3));
    CHECK(gamma_iter(h3, 0) == h3.h);
    CHECK(gamma_iter(h3, 1) == xp("3*x^4-6*x^2+3"));
    CHECK(gamma_iter(h3, 2) == xp("9*x^5-9*x"));
    TargetSpec h2(hermite(2));
    CHECK(gamma_iter(h2, 2) == xp("4*x^2"));
}

TEST_CASE("cumulant bridge") {
    for (unsigned p : {2u, 3u}) {
        TargetSpec tg(hermite(p));
        for (unsigned r = 1; r <= 4; ++r) {
            Rational lhs = Rational::factorial(r) * expect(gamma_iter(tg, r));
            CHECK(lhs == cumulant(tg.h, r + 1));
        }
    }
}

TEST_CASE("gamma moment oracle matches iterated gamma pairings") {
    PolyGen gen(47);
    for (unsigned p : {2u, 3u}) {
        TargetSpec tg(hermite(p));
        for (int i = 0; i < 6; ++i) {
            Poly q = gen.poly(1, 3);
            Poly g = tg.embed(q);
            for (unsigned t = 1; t <= 3; ++t) {
                g = gamma(tg, g);
                CHECK(expect(g) == gamma_moment_oracle(tg, t, q));
            }
        }
    }
}
