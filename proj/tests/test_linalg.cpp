#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stein/linalg.hpp"

using namespace stein;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = Rational(rows[i][j]);
    return m;
}

std::vector<Rational> rvec(const std::vector<long>& v) {
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

std::vector<Rational> mat_vec(const RationalMatrix& A, const std::vector<Rational>& x) {
    std::vector<Rational> out(A.rows, Rational(0));
    for (size_t i = 0; i < A.rows; ++i)
        for (size_t j = 0; j < A.cols; ++j) out[i] += A.at(i, j) * x[j];
    return out;
}

}  // namespace

TEST_CASE("identity system") {
    RationalMatrix I = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto b = rvec({3, -5, 7});
    SolveOutcome s = solve_exact(I, b);
    CHECK(s.solvable);
    CHECK(s.particular == b);
    CHECK(s.nullspace.empty());
    CHECK(s.rank == 3);
}

TEST_CASE("rank-one system with nullspace") {
    RationalMatrix A = from_rows({{1, 2}, {2, 4}});
    SolveOutcome s = solve_exact(A, rvec({1, 2}));
    CHECK(s.solvable);
    CHECK(s.particular == rvec({1, 0}));
    REQUIRE(s.nullspace.size() == 1);
    CHECK(s.nullspace[0] == rvec({-2, 1}));
}

TEST_CASE("inconsistent system") {
    RationalMatrix A = from_rows({{1, 2}, {2, 4}});
    SolveOutcome s = solve_exact(A, rvec({1, 3}));
    CHECK_FALSE(s.solvable);
}

TEST_CASE("zero column yields a unit nullspace vector") {
    RationalMatrix A = from_rows({{1, 0, 2}, {0, 0, 1}});
    SolveOutcome s = solve_exact(A, rvec({3, 1}));
    CHECK(s.solvable);
    REQUIRE(s.nullspace.size() == 1);
    CHECK(s.nullspace[0] == rvec({0, 1, 0}));
}

TEST_CASE("random systems verified by exact residuals") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> entry(-6, 6);
    for (int trial = 0; trial < 25; ++trial) {
        size_t rows = 6, cols = 9;
        RationalMatrix A(rows, cols);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) A.at(i, j) = Rational(entry(rng));
        // consistent right-hand side by construction
        std::vector<Rational> x0;
        for (size_t j = 0; j < cols; ++j) x0.emplace_back(entry(rng));
        std::vector<Rational> b = mat_vec(A, x0);
        SolveOutcome s = solve_exact(A, b);
        REQUIRE(s.solvable);
        CHECK(mat_vec(A, s.particular) == b);
        for (const auto& n : s.nullspace) {
            std::vector<Rational> zero(rows, Rational(0));
            CHECK(mat_vec(A, n) == zero);
        }
        CHECK(s.rank + s.nullspace.size() == cols);
    }
}

TEST_CASE("deterministic output") {
    std::mt19937 rng(999);
    std::uniform_int_distribution<long> entry(-5, 5);
    RationalMatrix A(5, 7);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 7; ++j) A.at(i, j) = Rational(entry(rng));
    std::vector<Rational> x0;
    for (size_t j = 0; j < 7; ++j) x0.emplace_back(entry(rng));
    std::vector<Rational> b = mat_vec(A, x0);
    SolveOutcome s1 = solve_exact(A, b);
    SolveOutcome s2 = solve_exact(A, b);
    CHECK(s1.particular == s2.particular);
    CHECK(s1.nullspace == s2.nullspace);
}

TEST_CASE("kernel") {
    RationalMatrix A = from_rows({{1, 1, 0}, {0, 0, 1}});
    auto k = kernel(A);
    REQUIRE(k.size() == 1);
    CHECK(k[0] == rvec({-1, 1, 0}));
}
