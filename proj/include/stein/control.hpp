#ifndef STEIN_CONTROL_HPP
#define STEIN_CONTROL_HPP

#include <chrono>
#include <map>
#include <optional>
#include <vector>

#include "stein/linalg.hpp"
#include "stein/malliavin.hpp"
#include "stein/poly.hpp"

namespace stein {

// Degree bound for chain states at stage t with control degree cap m:
// deg(h)*m + (deg(h)-2)*t for univariate targets, deg(h)*(m+t) otherwise.
int state_bound(const TargetSpec& target, int m, int t);

// Monomial enumeration of the truncated ring: all multi-indices with total
// degree <= bound, graded (total degree ascending, lexicographic within).
struct StateBasis {
    int nvars = 1;
    int bound = 0;
    std::vector<MultiIndex> monomials;
    std::map<MultiIndex, size_t> index;

    static StateBasis make(int nvars, int bound);
    size_t size() const { return monomials.size(); }
    std::vector<Rational> to_coeffs(const Poly& p) const;  // throws if p does not fit
    Poly from_coeffs(const std::vector<Rational>& v) const;
};

using StateVector = std::vector<Rational>;

// Matrix of the gamma operator on K_bound: column j holds the coefficients of
// gamma applied to the j-th basis monomial, rows sized for the image degree.
RationalMatrix gamma_matrix(const TargetSpec& target, int bound, GammaVariant variant = GammaVariant::standard);

// Input matrix: column k (k = 0..m) holds the coefficients of gamma applied
// to h(x)^k (centered target); column 0 is zero.
RationalMatrix lambda_matrix(const TargetSpec& target, int m, int bound,
                             GammaVariant variant = GammaVariant::standard);

enum class ZeroOrderMode { cy, monomial, generic, explicit_poly };

struct ZeroOrder {
    ZeroOrderMode mode = ZeroOrderMode::cy;
    unsigned k = 1;   // monomial mode: p0 = y^k - E[Y^k]
    Poly poly{1};     // explicit mode: polynomial in the target value as given
    static ZeroOrder cy() { return {}; }
    static ZeroOrder monomial(unsigned k) { return {ZeroOrderMode::monomial, k, Poly(1)}; }
    static ZeroOrder explicit_poly(Poly p) { return {ZeroOrderMode::explicit_poly, 1, std::move(p)}; }
};

struct ControlSolution {
    int T = 0;
    // canonical coefficients p_0..p_T in the target value as given, integers
    // with content 1, moment conditions enforced
    std::vector<Poly> coeffs;
    Rational scale;  // normalization applied to reach the canonical form
    // affine solution set: raw particular (p_1..p_T, centered variable, free
    // variables zero, before moment fixes) and nullspace basis directions
    std::vector<Poly> particular_raw;
    std::vector<std::vector<Poly>> nullspace;  // each entry: T+1 slots, slot 0 zero
    Poly zero_order{1};                        // canonical p_0 (= coeffs[0])
};

enum class FindStatus { found, not_reachable, timed_out, degenerate_target };

struct FindOptions {
    GammaVariant variant = GammaVariant::standard;
    bool all_horizons = false;
    bool want_nullspace = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct FindResult {
    FindStatus status = FindStatus::not_reachable;
    int t_max = 0;
    std::vector<ControlSolution> solutions;  // first feasible horizon, or all with all_horizons

    const ControlSolution& best() const { return solutions.front(); }
};

// Incremental-horizon search for control sequences p_1..p_T in K_m[y] whose
// chain ends in the exact identity g_T + p_T(Y) = 0, with E[p_s(Y)] = -E[g_s]
// at every stage. Returns the affine solution set at the first feasible
// horizon (every horizon up to T_max with all_horizons).
FindResult find_null_control(const TargetSpec& target, int T_max, int m, const ZeroOrder& zero_order,
                             const FindOptions& opts = {});

struct CombineResult {
    bool reduced = false;  // false: no combination removed the top block
    ControlSolution op;
};

// Runs the monomial searches p0 = y^k - E[Y^k] for k = 1..m0, then looks for
// an exact rational combination (together with horizon-nullspace directions)
// whose top-order block vanishes, and re-solves with the combined zero-order
// term to obtain the canonical reduced operator.
CombineResult combine_generic_zero_order(const TargetSpec& target, unsigned m0, int T_max, int m,
                                         const FindOptions& opts = {});

// Feasibility searches used by the summary table.
enum class SearchMode { cy, general };

struct SearchCaps {
    int t_cap = 30;
    int m_cap = 26;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct PairTM {
    int T = 0;
    int m = 0;
};

// Smallest horizon T with any feasible m <= m_cap, then the smallest feasible
// m at that horizon.
std::optional<PairTM> search_min_order(const TargetSpec& target, SearchMode mode, const SearchCaps& caps,
                                       GammaVariant variant = GammaVariant::standard);

// Smallest coefficient degree m with a feasible horizon <= t_cap, then the
// smallest feasible horizon at that degree.
std::optional<PairTM> search_min_degree(const TargetSpec& target, SearchMode mode, const SearchCaps& caps,
                                        GammaVariant variant = GammaVariant::standard);

// First feasible horizon at fixed degree cap (cy: p0 = y; general: any
// nonzero centered p0 of degree <= m).
std::optional<int> first_feasible_horizon(const TargetSpec& target, SearchMode mode, int m, int t_cap,
                                          GammaVariant variant = GammaVariant::standard,
                                          std::optional<std::chrono::steady_clock::time_point> deadline = {});

}  // namespace stein

#endif
