#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "stein/control.hpp"
#include "stein/document.hpp"
#include "stein/hermite.hpp"

using namespace stein;
using namespace stein::testing;

namespace {

OperatorDocument solve_h4_doc() {
    TargetSpec tg(hermite(4));
    FindResult r = find_null_control(tg, 5, 2, ZeroOrder::cy());
    REQUIRE(r.status == FindStatus::found);
    OperatorDocument doc = document_from_solution(tg, r.best(), "cy", Provenance::solver);
    bool ok = false;
    SteinOperator op(tg, r.best().coeffs, Provenance::solver);
    doc.verification = run_verification(op, &ok);
    REQUIRE(ok);
    return doc;
}

}  // namespace

TEST_CASE("json round trip is bit-exact") {
    OperatorDocument doc = solve_h4_doc();
    std::string text = document_to_json(doc);
    OperatorDocument back = document_from_json(text);
    CHECK(document_to_json(back) == text);
    CHECK(back.T == 3);
    CHECK(back.m == 2);
    CHECK(back.coefficients == doc.coefficients);
}

TEST_CASE("document consistency is enforced on load") {
    OperatorDocument doc = solve_h4_doc();
    OperatorDocument broken = doc;
    broken.T = 4;
    CHECK_THROWS(operator_from_document(broken));
    broken = doc;
    broken.m = 5;
    CHECK_THROWS(operator_from_document(broken));
    broken = doc;
    broken.centered_shift = Rational(1);
    CHECK_THROWS(operator_from_document(broken));
    CHECK_THROWS(document_from_json("{"));
    CHECK_THROWS(document_from_json("{\"schema_version\": \"stein-operator/2\"}"));
}

TEST_CASE("symbolic rendering matches the reference strings") {
    OperatorDocument doc = solve_h4_doc();
    std::vector<Poly> coeffs;
    for (const auto& s : doc.coefficients) coeffs.push_back(parse_poly_y(s));
    CHECK(render_symbolic(coeffs) == "(192*y^2+576*y-3456)*D^3+(-16*y^2+144*y+576)*D^2+(-44*y-24)*D+y");

    std::vector<Poly> h3;
    for (const char* s : {"5*y", "-3*y^2-12", "207*y", "351*y^2-1080", "81*y^3-324*y"})
        h3.push_back(parse_poly_y(s));
    CHECK(render_symbolic(h3) == "(81*y^3-324*y)*D^4+(351*y^2-1080)*D^3+207*y*D^2+(-3*y^2-12)*D+5*y");
}

TEST_CASE("latex rendering matches the reference layout") {
    std::vector<Poly> h2 = {parse_poly_y("y"), parse_poly_y("-2*y-2")};
    CHECK(render_latex(h2) == "y - (2\\,y + 2)\\partial");
    std::vector<Poly> h1 = {parse_poly_y("y"), parse_poly_y("-1")};
    CHECK(render_latex(h1) == "y - \\partial");
}

TEST_CASE("verification block reflects the checks") {
    TargetSpec tg(hermite(2));
    SteinOperator good(tg, {parse_poly_y("y"), parse_poly_y("-2*y-2")}, Provenance::fixture);
    bool ok = false;
    VerificationBlock v = run_verification(good, &ok);
    CHECK(ok);
    CHECK(v.replay_residual_zero);
    CHECK(v.moment_defects_zero);
    CHECK(v.backward_ok);

    SteinOperator bad(tg, {parse_poly_y("y"), parse_poly_y("-2*y-1")}, Provenance::fixture);
    ok = true;
    VerificationBlock vb = run_verification(bad, &ok);
    CHECK_FALSE(ok);
    CHECK_FALSE(vb.replay_residual_zero);
}
