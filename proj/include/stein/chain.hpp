#ifndef STEIN_CHAIN_HPP
#define STEIN_CHAIN_HPP

#include <string>
#include <vector>

#include "stein/malliavin.hpp"
#include "stein/poly.hpp"

namespace stein {

enum class Provenance { solver, fixture, user };

// Differential operator sum_t p_t(y) d^t with polynomial coefficients, tied
// to its target. Coefficients are stated in the target value as given.
struct SteinOperator {
    TargetSpec target;
    std::vector<Poly> coeffs;  // p_0..p_T, univariate in y; p_T nonzero
    Provenance provenance = Provenance::user;

    SteinOperator(TargetSpec t, std::vector<Poly> p, Provenance prov = Provenance::user);

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    int max_degree() const;
};

struct ChainTrace {
    std::vector<Poly> g;                  // g_0..g_T, polynomials in x
    Poly residual{1};                     // g_T + p_T(h(x))
    std::vector<Rational> moment_defects;  // E[g_t] + E[p_t(Y)], t = 0..T

    bool residual_zero() const { return residual.is_zero(); }
    bool moments_zero() const {
        for (const auto& d : moment_defects)
            if (!d.is_zero()) return false;
        return true;
    }
    bool is_algebraic() const { return residual_zero() && moments_zero(); }
};

// Replays g_t = gamma(g_{t-1} + p_{t-1}(Y)) from g_0 = 0 and reports the
// exact residual g_T + p_T(h(x)) together with the per-stage moment defects.
ChainTrace forward_replay(const SteinOperator& op, GammaVariant variant = GammaVariant::standard);

// E[Y^s p_0(Y)] + s E[Y^{s-1} p_1(Y)] + ... + s! E[p_s(Y)] for s = 0..s_max
// (p_s = 0 beyond the order). All must vanish for a valid operator; this is
// the operator applied to y^s in expectation.
std::vector<Rational> pairing_defects(const SteinOperator& op, int s_max);

// pairing_defects with the precondition s_max >= order.
std::vector<Rational> moment_conditions(const SteinOperator& op, int s_max);

struct BackwardReport {
    bool ok = false;
    int failed_stage = -1;  // 0..T-1: division stage; T: final identity
    std::string message;
    std::vector<Poly> divisors;  // q_T, q_{T-1}, ..., q_1 as reconstructed
};

// Validates the operator from the top coefficient downward: q_T =
// -p_T(h)/h', then q_{t-1} = (delta q_t - p_{t-1}(h))/h' stage by stage,
// succeeding when delta q_1 = p_0(h) exactly. Univariate targets only.
BackwardReport backward_validate(const SteinOperator& op);

struct TopCoefficientReport {
    bool applicable = false;  // target is a Hermite polynomial of degree >= 2
    int p = 0;
    int required_degree = 0;
    int actual_degree = 0;
    bool degree_ok = false;
    bool numeric_ok = false;
    double numeric_max = 0.0;
    bool exact_checked = false;  // exact route runs for p <= 6
    bool exact_divisible = false;
    Poly critical_value_poly{1};  // exact generator of K[y] ∩ <h'>, p <= 6

    bool passed() const { return applicable && degree_ok && numeric_ok && (!exact_checked || exact_divisible); }
};

// Structure checks on the highest coefficient for targets H_p: the
// parity-dependent degree lower bound, numeric vanishing at the critical
// values of H_p, and (p <= 6) exact divisibility by the squarefree resultant
// of H_p'(x) and y - H_p(x).
TopCoefficientReport top_coefficient_check(const SteinOperator& op, double tol = 1e-9);

// Exact univariate division: p = q*d + r with deg r < deg d.
std::pair<Poly, Poly> divide_univariate(const Poly& p, const Poly& d);

}  // namespace stein

#endif
