#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include "stein/analytics.hpp"
#include "stein/chain.hpp"
#include "stein/control.hpp"
#include "stein/document.hpp"

using namespace stein;

#ifndef FIXTURES_DIR
#error "FIXTURES_DIR must point at the fixture corpus"
#endif

namespace {

std::vector<std::filesystem::path> fixture_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(FIXTURES_DIR)) {
        if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("stored corpus passes the full validation suite") {
    auto files = fixture_files();
    REQUIRE(files.size() >= 23);
    for (const auto& f : files) {
        CAPTURE(f.filename().string());
        OperatorDocument doc = document_from_json(slurp(f));
        CHECK(doc.provenance == "fixture");
        SteinOperator op = operator_from_document(doc);

        ChainTrace tr = forward_replay(op);
        CHECK(tr.residual_zero());
        CHECK(tr.moments_zero());

        for (const auto& d : moment_conditions(op, op.order() + 4)) CHECK(d.is_zero());

        int K = 2 * op.order() + op.max_degree() + 4;
        CHECK(K == doc.verification.stein_identity_k);
        for (const auto& d : stein_identity_check(op, K)) CHECK(d.is_zero());

        if (op.target.d == 1) {
            CHECK(backward_validate(op).ok);
            // with the chain exact, the modified variant must agree
            CHECK(forward_replay(op, GammaVariant::modified).residual_zero());
        }

        // intermediate states respect the degree bound
        for (size_t t = 0; t < tr.g.size(); ++t) {
            auto dg = tr.g[t].degree();
            if (dg) CHECK(*dg <= state_bound(op.target, op.max_degree(), static_cast<int>(t)));
        }
    }
}

TEST_CASE("documents round-trip bit-exactly") {
    for (const auto& f : fixture_files()) {
        std::string text = slurp(f);
        CHECK(document_to_json(document_from_json(text)) == text);
    }
}
