#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "stein/analytics.hpp"
#include "stein/hermite.hpp"
#include "stein/malliavin.hpp"

using namespace stein;
using namespace stein::testing;

namespace {

SteinOperator make_op(const Poly& h, const std::vector<std::string>& coeffs) {
    std::vector<Poly> c;
    for (const auto& s : coeffs) c.push_back(parse_poly_y(s));
    return SteinOperator(TargetSpec(h), std::move(c), Provenance::fixture);
}

SteinOperator gaussian_op() { return make_op(hermite(1), {"y", "-1"}); }
SteinOperator h2_op() { return make_op(hermite(2), {"y", "-2*y-2"}); }
SteinOperator h3_order4() {
    return make_op(hermite(3), {"5*y", "-3*y^2-12", "207*y", "351*y^2-1080", "81*y^3-324*y"});
}
SteinOperator h3_order5() {
    return make_op(hermite(3), {"y", "-6", "-99*y", "-27*y^2+216", "486*y", "486*y^2-1944"});
}
SteinOperator h4_op() {
    return make_op(hermite(4), {"y", "-44*y-24", "-16*y^2+144*y+576", "192*y^2+576*y-3456"});
}
SteinOperator a1_op() {
    return make_op(xp("x^3+x^2-2*x-1"),
                   {"y", "-4*y-9", "-92*y-43", "-27*y^2+82*y+119", "27*y^2+392*y+49", "378*y^2+196*y-686"});
}
SteinOperator a2_op() {
    return make_op(xp("x^3+x^2-3*x-1"),
                   {"y", "-4*y-8", "-98*y-26", "-27*y^2+118*y+324", "27*y^2+536*y-188", "540*y^2-80*y-2960"});
}
SteinOperator a3_op() {
    return make_op(xp("x^4-5*x^2+2"), {"y", "-42*y-26", "-16*y^2+124*y+316", "160*y^2+360*y-1360"});
}

std::vector<GaussRational> row(std::initializer_list<std::pair<long, long>> re_im) {
    std::vector<GaussRational> out;
    for (auto& [re, im] : re_im) out.emplace_back(Rational(re), Rational(im));
    return out;
}

std::vector<double> t_grid() {
    std::vector<double> ts;
    for (int i = 0; i < 20; ++i) ts.push_back(0.1 + 1.9 * i / 19.0);
    return ts;
}

}  // namespace

TEST_CASE("identity pairings") {
    for (const auto& d : stein_identity_check(gaussian_op(), 6)) CHECK(d.is_zero());
    for (const auto& d : stein_identity_check(h2_op(), 8)) CHECK(d.is_zero());
    for (const auto& d : stein_identity_check(h4_op(), 20)) CHECK(d.is_zero());
}

TEST_CASE("characteristic-function equation, Gaussian") {
    CharFnODE ode = charfn_ode(gaussian_op());
    REQUIRE(ode.order == 1);
    CHECK(ode.coeffs[1] == row({{1, 0}}));          // phi'
    CHECK(ode.coeffs[0] == row({{0, 0}, {1, 0}}));  // t phi
}

TEST_CASE("characteristic-function equation, cubic target of order four") {
    CharFnODE ode = charfn_ode(h3_order4());
    REQUIRE(ode.order == 3);
    CHECK(ode.coeffs[3] == row({{0, 0}, {0, 0}, {0, 0}, {0, 0}, {81, 0}}));
    CHECK(ode.coeffs[2] == row({{0, 0}, {3, 0}, {0, 0}, {351, 0}}));
    CHECK(ode.coeffs[1] == row({{-5, 0}, {0, 0}, {207, 0}, {0, 0}, {324, 0}}));
    CHECK(ode.coeffs[0] == row({{0, 0}, {-12, 0}, {0, 0}, {1080, 0}}));
    CHECK(ode.latex() ==
          "81t^{4}\\varphi^{(3)}(t)+(351t^{3}+3t)\\varphi^{(2)}(t)+(324t^{4}+207t^{2}-5)\\varphi^{(1)}(t)+"
          "(1080t^{3}-12t)\\varphi(t)=0");
}

TEST_CASE("characteristic-function equation, quartic target") {
    CharFnODE ode = charfn_ode(h4_op());
    REQUIRE(ode.order == 2);
    CHECK(ode.coeffs[2] == row({{0, 0}, {0, 0}, {16, 0}, {0, -192}}));
    CHECK(ode.coeffs[1] == row({{0, 1}, {44, 0}, {0, -144}, {576, 0}}));
    CHECK(ode.coeffs[0] == row({{0, 0}, {0, 24}, {576, 0}, {0, -3456}}));
}

TEST_CASE("pole classification") {
    PoleClassification c5 = charfn_pole_classify(charfn_ode(h3_order5()));
    CHECK(c5.kind == PoleClassification::Kind::odd_pole);
    CHECK(c5.alpha == 3);
    CHECK(c5.p0 == Rational(1, 27));

    PoleClassification c4 = charfn_pole_classify(charfn_ode(h4_op()));
    CHECK(c4.kind == PoleClassification::Kind::order_two_pole);
    CHECK(c4.a == Rational(1, 16));
    CHECK(c4.b == Rational(2));

    PoleClassification ca3 = charfn_pole_classify(charfn_ode(a3_op()));
    CHECK(ca3.kind == PoleClassification::Kind::order_two_pole);
    CHECK(ca3.a == Rational(1, 16));
    CHECK(ca3.b == Rational(2));

    PoleClassification ca1 = charfn_pole_classify(charfn_ode(a1_op()));
    CHECK(ca1.kind == PoleClassification::Kind::odd_pole);
    CHECK(ca1.alpha == 3);
    CHECK(ca1.p0 == Rational(1, 27));

    PoleClassification ca2 = charfn_pole_classify(charfn_ode(a2_op()));
    CHECK(ca2.kind == PoleClassification::Kind::odd_pole);
    CHECK(ca2.alpha == 3);
    CHECK(ca2.p0 == Rational(1, 27));

    CHECK_THROWS(charfn_pole_classify(charfn_ode(h3_order4())));  // order 3
}

TEST_CASE("numeric residual") {
    ResidualReport g = charfn_residual(gaussian_op(), {0.5, 1.0, 2.0});
    CHECK(g.max_residual < 1e-10);
    CHECK(g.converged);

    ResidualReport r3 = charfn_residual(h3_order4(), t_grid());
    CHECK(r3.max_residual < 1e-6);
    CHECK(r3.converged);

    // corrupting one coefficient must blow the residual up
    SteinOperator bad = make_op(hermite(3), {"5*y", "-3*y^2-11", "207*y", "351*y^2-1080", "81*y^3-324*y"});
    ResidualReport rb = charfn_residual(bad, t_grid());
    CHECK(rb.max_residual > 1e-2);
}

TEST_CASE("iterated-gamma identities") {
    CHECK(gamma_characterization_check(GammaIdentity::H3_fifth_order).is_zero());
    CHECK(gamma_characterization_check(GammaIdentity::H3_fourth_order).is_zero());
    CHECK(gamma_characterization_check(GammaIdentity::H4_third_order).is_zero());
}

TEST_CASE("iterated-gamma identities are sensitive to every constant") {
    // rebuild the first identity with 153 -> 152: nonzero residual
    TargetSpec tg(hermite(3));
    Poly y = tg.h;
    Poly one = Poly::constant(1, Rational(1));
    Poly g1 = gamma_iter(tg, 1), g2 = gamma_iter(tg, 2), g3 = gamma_iter(tg, 3), g5 = gamma_iter(tg, 5);
    Poly wrong = g5 - Rational(152) * g3 - Rational(27) * y * g2 + Rational(324) * g1 -
                 Rational(486) * (Rational(4) * one - y * y);
    CHECK_FALSE(wrong.is_zero());

    // the quartic-target identity with 60 -> 61
    TargetSpec t4(hermite(4));
    Poly y4 = t4.h;
    Poly one4 = Poly::constant(1, Rational(1));
    Poly w4 = gamma_iter(t4, 3) - Rational(61) * gamma_iter(t4, 2) +
              Rational(16) * (Rational(9) * one4 - y4) * gamma_iter(t4, 1) -
              Rational(192) * (y4 + Rational(6) * one4) * (Rational(3) * one4 - y4);
    CHECK_FALSE(w4.is_zero());
}

TEST_CASE("gaussian rational arithmetic") {
    GaussRational i = GaussRational::unit_power(1);
    CHECK(GaussRational::unit_power(-1) == GaussRational(Rational(0), Rational(-1)));
    CHECK(i * i == GaussRational(Rational(-1)));
    GaussRational z(Rational(1), Rational(2));
    CHECK(z / z == GaussRational(Rational(1)));
    CHECK((z * GaussRational(Rational(0), Rational(1))).re == Rational(-2));
    CHECK(z.str() == "1+2i");
}
