#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "stein/chain.hpp"
#include "stein/control.hpp"
#include "stein/hermite.hpp"

using namespace stein;
using namespace stein::testing;

namespace {

SteinOperator make_op(const Poly& h, const std::vector<std::string>& coeffs,
                      Provenance prov = Provenance::fixture) {
    std::vector<Poly> c;
    for (const auto& s : coeffs) c.push_back(parse_poly_y(s));
    return SteinOperator(TargetSpec(h), std::move(c), prov);
}

SteinOperator h4_op() {
    return make_op(hermite(4), {"y", "-44*y-24", "-16*y^2+144*y+576", "192*y^2+576*y-3456"});
}

SteinOperator h3_op() {
    return make_op(hermite(3), {"5*y", "-3*y^2-12", "207*y", "351*y^2-1080", "81*y^3-324*y"});
}

}  // namespace

TEST_CASE("operator invariants") {
    CHECK_THROWS(make_op(hermite(2), {"y"}));              // order 0
    CHECK_THROWS(make_op(hermite(2), {"y", "0"}));         // zero top coefficient
    SteinOperator op = h4_op();
    CHECK(op.order() == 3);
    CHECK(op.max_degree() == 2);
}

TEST_CASE("forward replay of golden operators") {
    ChainTrace tr = forward_replay(h4_op());
    CHECK(tr.residual_zero());
    CHECK(tr.moments_zero());
    CHECK(tr.is_algebraic());
    CHECK(tr.g[0].is_zero());

    ChainTrace tr3 = forward_replay(h3_op());
    CHECK(tr3.is_algebraic());

    // the intermediate states divide by h' exactly and respect the bound
    SteinOperator op = h3_op();
    Poly hp = op.target.h_raw.partial(0);
    for (size_t t = 0; t < tr3.g.size(); ++t) {
        auto [q, r] = divide_univariate(tr3.g[t], hp);
        CHECK(r.is_zero());
        auto dg = tr3.g[t].degree();
        if (dg) CHECK(*dg <= state_bound(op.target, op.max_degree(), static_cast<int>(t)));
    }
}

TEST_CASE("forward replay with the modified variant agrees for univariate targets") {
    CHECK(forward_replay(h4_op(), GammaVariant::modified).residual_zero());
    CHECK(forward_replay(h3_op(), GammaVariant::modified).residual_zero());
}

TEST_CASE("non-algebraic operators leave a nonzero residual") {
    // product of two independent chi-squares: y^2 d^2 + 2y d + (1-y)/4
    SteinOperator prod2 = make_op(xp("x1^2*x2^2", 2), {"1/4-1/4*y", "2*y", "y^2"});
    ChainTrace tr = forward_replay(prod2);
    CHECK_FALSE(tr.residual_zero());
    // it is still a Stein operator: pairings against y^s vanish
    for (const auto& d : pairing_defects(prod2, 8)) CHECK(d.is_zero());

    // product of three independent Gaussians: y^2 d^3 + 3y d^2 + d - y
    SteinOperator prod3 = make_op(xp("x1*x2*x3", 3), {"-y", "1", "3*y", "y^2"});
    CHECK_FALSE(forward_replay(prod3).residual_zero());
}

TEST_CASE("moment conditions") {
    SteinOperator op = h4_op();
    std::vector<Rational> d = moment_conditions(op, op.order() + 4);
    for (const auto& v : d) CHECK(v.is_zero());
    // s = 1 unpacks to E[Y^2] - 24
    CHECK(expect(op.target.h_raw * op.target.h_raw) == Rational(24));

    SteinOperator h2 = make_op(hermite(2), {"y", "-2*y-2"});
    for (const auto& v : moment_conditions(h2, 6)) CHECK(v.is_zero());
    CHECK_THROWS(moment_conditions(h2, 0));

    // perturbing one constant breaks exactly the pairings
    SteinOperator bad = make_op(hermite(2), {"y", "-2*y-3"});
    CHECK_FALSE(moment_conditions(bad, 4)[1].is_zero());
}

TEST_CASE("backward validation") {
    BackwardReport r4 = backward_validate(h4_op());
    CHECK(r4.ok);
    CHECK(r4.divisors.size() == 3);  // q_3, q_2, q_1

    CHECK(backward_validate(h3_op()).ok);

    // y is not in the ideal generated by h' for the cubic target
    SteinOperator bad = make_op(hermite(3), {"y", "y"});
    BackwardReport rb = backward_validate(bad);
    CHECK_FALSE(rb.ok);
    CHECK(rb.failed_stage == 0);
}

TEST_CASE("top coefficient structure") {
    // order-4 operator: t(y) = y^2 - 4 divides 81y^3 - 324y
    TopCoefficientReport r = top_coefficient_check(h3_op());
    CHECK(r.applicable);
    CHECK(r.required_degree == 2);
    CHECK(r.degree_ok);
    CHECK(r.numeric_ok);
    CHECK(r.exact_checked);
    CHECK(r.exact_divisible);
    CHECK(r.critical_value_poly == parse_poly_y("y^2-4"));

    // order-5 family: 486y^2 - 1944 = 486(y^2 - 4)
    SteinOperator h3b = make_op(hermite(3), {"y", "-6", "-99*y", "-27*y^2+216", "486*y", "486*y^2-1944"});
    TopCoefficientReport rb = top_coefficient_check(h3b);
    CHECK(rb.passed());

    // degree bound met with equality for the quartic target
    TopCoefficientReport r4 = top_coefficient_check(h4_op());
    CHECK(r4.required_degree == 2);
    CHECK(r4.actual_degree == 2);
    CHECK(r4.passed());
    CHECK(r4.critical_value_poly == parse_poly_y("y^2+3*y-18"));  // (y-3)(y+6)

    // not a Hermite target
    SteinOperator x3 = make_op(xp("x^3"), {"y", "-15", "-81*y", "-27*y^2"});
    CHECK_FALSE(top_coefficient_check(x3).applicable);
}

TEST_CASE("univariate division") {
    auto [q, r] = divide_univariate(parse_poly_y("y^3-1"), parse_poly_y("y-1"));
    CHECK(q == parse_poly_y("y^2+y+1"));
    CHECK(r.is_zero());
    auto [q2, r2] = divide_univariate(parse_poly_y("y^2"), parse_poly_y("y+1"));
    CHECK(q2 == parse_poly_y("y-1"));
    CHECK(r2 == parse_poly_y("1"));
    CHECK_THROWS(divide_univariate(parse_poly_y("y"), Poly(1)));
}
