#include "stein/control.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace stein {

namespace {

struct Timeout {};

void check_deadline(const std::optional<std::chrono::steady_clock::time_point>& deadline) {
    if (deadline && std::chrono::steady_clock::now() > *deadline) throw Timeout{};
}

// Triangular basis of a polynomial subspace, keyed by leading monomial
// (largest exponent vector). Vectors are kept integer with content 1.
class EchelonBasis {
  public:
    // Full normal form of p modulo the span: every monomial matching a basis
    // head is cancelled, largest first. The map p -> reduce(p) is linear, and
    // a zero result certifies membership.
    Poly reduce(Poly p) const {
        std::optional<MultiIndex> bound;  // exclusive upper bound on untested monomials
        while (!p.is_zero()) {
            const auto& tm = p.terms();
            std::map<MultiIndex, Rational>::const_iterator it;
            if (!bound) {
                it = std::prev(tm.end());
            } else {
                auto lb = tm.lower_bound(*bound);
                if (lb == tm.begin()) break;
                it = std::prev(lb);
            }
            auto b = by_lead_.find(it->first);
            if (b == by_lead_.end()) {
                bound = it->first;
                continue;
            }
            const Poly& base = b->second;
            const Rational& bc = std::prev(base.terms().end())->second;
            p -= base * (it->second / bc);  // removes it->first; adds smaller monomials only
        }
        return p;
    }

    bool member(const Poly& p) const { return reduce(p).is_zero(); }

    // Inserts the reduction of p; returns false when p was already in the span.
    bool insert(Poly p) {
        p = reduce(std::move(p));
        if (p.is_zero()) return false;
        auto norm = content_normalize({p});
        Poly q = std::move(norm.first.front());
        MultiIndex lead = std::prev(q.terms().end())->first;
        by_lead_.emplace(std::move(lead), std::move(q));
        return true;
    }

    size_t rank() const { return by_lead_.size(); }

  private:
    std::map<MultiIndex, Poly> by_lead_;
};

// Lazily grown table of Γ^j(h^k) for the centered target.
class GammaPowers {
  public:
    GammaPowers(const TargetSpec& target, GammaVariant variant) : target_(target), variant_(variant) {}

    const Poly& get(unsigned k, unsigned j) {
        while (rows_.size() <= k) {
            unsigned kk = static_cast<unsigned>(rows_.size());
            rows_.push_back({kk == 0 ? Poly::constant(target_.d, Rational(1)) : rows_[kk - 1].front() * target_.h});
        }
        auto& row = rows_[k];
        while (row.size() <= j) row.push_back(gamma(target_, row.back(), variant_));
        return row[j];
    }

  private:
    const TargetSpec& target_;
    GammaVariant variant_;
    std::vector<std::vector<Poly>> rows_;  // rows_[k][j] = Γ^j(h^k); rows_[k][0] = h^k
};

// Incremental horizon sweep. After step() has been called T times the basis
// spans {Γ^j(h^k) : j = 0..T-1, k = 0..m} — exactly the column span of the
// horizon-T system — and rhs holds Γ^T(p0(h)).
class Sweep {
  public:
    Sweep(const TargetSpec& target, int m, GammaVariant variant, GammaPowers& powers, Poly v0)
        : target_(target), m_(m), variant_(variant), powers_(powers), rhs_(std::move(v0)) {}

    int horizon() const { return T_; }

    void step() {
        ++T_;
        rhs_ = gamma(target_, rhs_, variant_);
        for (int k = 0; k <= m_; ++k) basis_.insert(powers_.get(static_cast<unsigned>(k), static_cast<unsigned>(T_ - 1)));
    }

    bool feasible() const { return basis_.member(rhs_); }

    // Dependence of the centered zero-order candidate columns modulo the span:
    // true when some nonzero combination of Γ^T(h^k), k = 1..m, lies in it.
    bool feasible_general() {
        EchelonBasis scratch;
        for (int k = 1; k <= m_; ++k) {
            Poly r = basis_.reduce(powers_.get(static_cast<unsigned>(k), static_cast<unsigned>(T_)));
            if (r.is_zero()) return true;
            if (!scratch.insert(std::move(r))) return true;
        }
        return false;
    }

    const Poly& rhs() const { return rhs_; }

  private:
    const TargetSpec& target_;
    int m_;
    GammaVariant variant_;
    GammaPowers& powers_;
    Poly rhs_;
    EchelonBasis basis_;
    int T_ = 0;
};

Poly resolve_zero_order(const TargetSpec& target, const ZeroOrder& zo) {
    Poly y = Poly::variable(1, 0);
    switch (zo.mode) {
        case ZeroOrderMode::cy:
            return y;  // c fixed to 1; the canonical scale restores integers
        case ZeroOrderMode::monomial: {
            Poly p = y.pow(zo.k);
            p -= Poly::constant(1, expect(target.h.pow(zo.k)));
            return p;
        }
        case ZeroOrderMode::explicit_poly: {
            // stated in the target value as given; recenter onto the centered variable
            Poly shift_sub = Poly::variable(1, 0) + Poly::constant(1, target.centered_shift);
            Poly centered = compose_univariate(zo.poly, shift_sub);
            centered -= Poly::constant(1, expect(target.embed(zo.poly)));
            return centered;
        }
        case ZeroOrderMode::generic:
            throw std::logic_error("generic zero-order is handled by combine_generic_zero_order");
    }
    throw std::logic_error("unreachable");
}

struct HorizonSystem {
    std::vector<MultiIndex> rows;
    std::map<MultiIndex, size_t> row_index;
    RationalMatrix A;
    std::vector<Rational> b;
};

// Assembles the dense system for horizon T: block s = 1..T, column k = 0..m
// holds Γ^{T-s}(h^k); the right-hand side is -Γ^T(p0(h)).
HorizonSystem assemble(GammaPowers& powers, int m, int T, const Poly& rhs) {
    HorizonSystem sys;
    auto note_rows = [&](const Poly& p) {
        for (const auto& [mi, c] : p.terms()) sys.row_index.emplace(mi, 0);
    };
    for (int s = 1; s <= T; ++s)
        for (int k = 0; k <= m; ++k) note_rows(powers.get(static_cast<unsigned>(k), static_cast<unsigned>(T - s)));
    note_rows(rhs);
    size_t r = 0;
    for (auto& [mi, idx] : sys.row_index) {
        idx = r++;
        sys.rows.push_back(mi);
    }
    sys.A = RationalMatrix(sys.rows.size(), static_cast<size_t>(T) * static_cast<size_t>(m + 1));
    sys.b.assign(sys.rows.size(), Rational(0));
    for (int s = 1; s <= T; ++s) {
        for (int k = 0; k <= m; ++k) {
            size_t col = static_cast<size_t>(s - 1) * static_cast<size_t>(m + 1) + static_cast<size_t>(k);
            const Poly& p = powers.get(static_cast<unsigned>(k), static_cast<unsigned>(T - s));
            for (const auto& [mi, c] : p.terms()) sys.A.at(sys.row_index.at(mi), col) = c;
        }
    }
    for (const auto& [mi, c] : rhs.terms()) sys.b[sys.row_index.at(mi)] = -c;
    return sys;
}

std::vector<Poly> blocks_to_polys(const std::vector<Rational>& stacked, int T, int m) {
    std::vector<Poly> out;
    out.reserve(static_cast<size_t>(T));
    for (int s = 1; s <= T; ++s) {
        Poly p(1);
        for (int k = 0; k <= m; ++k) {
            const Rational& c = stacked[static_cast<size_t>(s - 1) * static_cast<size_t>(m + 1) + static_cast<size_t>(k)];
            if (!c.is_zero()) p.add_term(MultiIndex({static_cast<unsigned>(k)}), c);
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Enforces E[p_s(Y)] = -E[g_s] for s = 1..T-1 by shifting the constant
// coefficients; the chain polynomials are unaffected since gamma annihilates
// constants. The identity g_T + p_T(h) = 0 pins the constant of p_T already.
void apply_moment_corrections(const TargetSpec& target, const Poly& v0, std::vector<Poly>& p, GammaVariant variant) {
    int T = static_cast<int>(p.size());
    Poly g = gamma(target, v0, variant);
    for (int s = 1; s < T; ++s) {
        Rational defect = expect(g) + expect(target.embed_centered(p[static_cast<size_t>(s - 1)]));
        if (!defect.is_zero()) p[static_cast<size_t>(s - 1)] -= Poly::constant(1, defect);
        g = gamma(target, g + target.embed_centered(p[static_cast<size_t>(s - 1)]), variant);
    }
}

Poly substitute_shift(const Poly& p_in_centered_y, const Rational& shift) {
    if (shift.is_zero()) return p_in_centered_y;
    Poly y_minus_shift = Poly::variable(1, 0) - Poly::constant(1, shift);
    return compose_univariate(p_in_centered_y, y_minus_shift);
}

ControlSolution finish_solution(const TargetSpec& target, GammaPowers& powers, const Poly& p0_centered,
                                const Poly& rhs, int T, int m, bool want_nullspace, GammaVariant variant) {
    HorizonSystem sys = assemble(powers, m, T, rhs);
    SolveOutcome sol = solve_exact(sys.A, sys.b, want_nullspace);
    if (!sol.solvable) throw std::logic_error("horizon reported feasible but the system is unsolvable");

    ControlSolution out;
    out.T = T;
    std::vector<Poly> controls = blocks_to_polys(sol.particular, T, m);
    out.particular_raw = controls;

    // the representative must carry a nonzero top block; fall back to the
    // first nullspace direction that has one
    if (controls.back().is_zero()) {
        for (const auto& nv : sol.nullspace) {
            std::vector<Poly> cand = blocks_to_polys(nv, T, m);
            if (!cand.back().is_zero()) {
                for (int s = 0; s < T; ++s) controls[static_cast<size_t>(s)] += cand[static_cast<size_t>(s)];
                break;
            }
        }
    }

    Poly v0 = target.embed_centered(p0_centered);
    apply_moment_corrections(target, v0, controls, variant);

    std::vector<Poly> seq;
    seq.reserve(static_cast<size_t>(T) + 1);
    seq.push_back(substitute_shift(p0_centered, target.centered_shift));
    for (auto& c : controls) seq.push_back(substitute_shift(c, target.centered_shift));
    auto [canon, scale] = content_normalize(seq);
    out.coeffs = std::move(canon);
    out.scale = scale;
    out.zero_order = out.coeffs.front();

    if (want_nullspace) {
        for (const auto& nv : sol.nullspace) {
            std::vector<Poly> dir;
            dir.reserve(static_cast<size_t>(T) + 1);
            dir.push_back(Poly(1));
            for (auto& q : blocks_to_polys(nv, T, m)) dir.push_back(substitute_shift(q, target.centered_shift));
            auto [cdir, dscale] = content_normalize(dir);
            (void)dscale;
            out.nullspace.push_back(std::move(cdir));
        }
    }
    return out;
}

}  // namespace

int state_bound(const TargetSpec& target, int m, int t) {
    int p = target.degree();
    if (target.d == 1) return p * m + (p - 2) * t;
    return p * (m + t);
}

StateBasis StateBasis::make(int nvars, int bound) {
    StateBasis b;
    b.nvars = nvars;
    b.bound = bound;
    std::vector<unsigned> cur(static_cast<size_t>(nvars), 0);
    // graded enumeration: total degree ascending, lexicographic within
    for (int total = 0; total <= bound; ++total) {
        std::vector<MultiIndex> level;
        std::vector<unsigned> idx(static_cast<size_t>(nvars), 0);
        // enumerate compositions of `total` into nvars parts, lexicographically
        std::function<void(int, int)> rec = [&](int pos, int remaining) {
            if (pos == nvars - 1) {
                idx[static_cast<size_t>(pos)] = static_cast<unsigned>(remaining);
                level.emplace_back(idx);
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                idx[static_cast<size_t>(pos)] = static_cast<unsigned>(v);
                rec(pos + 1, remaining - v);
            }
        };
        rec(0, total);
        for (auto& m : level) b.monomials.push_back(std::move(m));
    }
    for (size_t i = 0; i < b.monomials.size(); ++i) b.index.emplace(b.monomials[i], i);
    return b;
}

std::vector<Rational> StateBasis::to_coeffs(const Poly& p) const {
    std::vector<Rational> v(size(), Rational(0));
    for (const auto& [m, c] : p.terms()) {
        auto it = index.find(m);
        if (it == index.end()) throw std::out_of_range("state bound too small to hold the polynomial");
        v[it->second] = c;
    }
    return v;
}

Poly StateBasis::from_coeffs(const std::vector<Rational>& v) const {
    Poly p(nvars);
    for (size_t i = 0; i < v.size() && i < monomials.size(); ++i) p.add_term(monomials[i], v[i]);
    return p;
}

RationalMatrix gamma_matrix(const TargetSpec& target, int bound, GammaVariant variant) {
    int p = target.degree();
    StateBasis domain = StateBasis::make(target.d, bound);
    StateBasis image = StateBasis::make(target.d, std::max(bound + p - 2, 0));
    RationalMatrix M(image.size(), domain.size());
    for (size_t j = 0; j < domain.size(); ++j) {
        Poly g = gamma(target, Poly::monomial(domain.monomials[j], Rational(1)), variant);
        std::vector<Rational> col = image.to_coeffs(g);  // throws on dimension audit failure
        for (size_t i = 0; i < col.size(); ++i)
            if (!col[i].is_zero()) M.at(i, j) = col[i];
    }
    return M;
}

RationalMatrix lambda_matrix(const TargetSpec& target, int m, int bound, GammaVariant variant) {
    int p = target.degree();
    StateBasis image = StateBasis::make(target.d, std::max(bound + p - 2, 0));
    RationalMatrix M(image.size(), static_cast<size_t>(m) + 1);
    Poly power = Poly::constant(target.d, Rational(1));
    for (int k = 0; k <= m; ++k) {
        if (k > 0) power = power * target.h;
        Poly g = gamma(target, power, variant);
        std::vector<Rational> col = image.to_coeffs(g);
        for (size_t i = 0; i < col.size(); ++i)
            if (!col[i].is_zero()) M.at(i, static_cast<size_t>(k)) = col[i];
    }
    return M;
}

FindResult find_null_control(const TargetSpec& target, int T_max, int m, const ZeroOrder& zero_order,
                             const FindOptions& opts) {
    FindResult res;
    res.t_max = T_max;
    if (target.degree() < 1) {
        res.status = FindStatus::degenerate_target;
        return res;
    }
    if (T_max < 1 || m < 0) throw std::invalid_argument("find_null_control: bad search bounds");

    Poly p0 = resolve_zero_order(target, zero_order);
    if (p0.is_zero()) throw std::invalid_argument("zero-order term vanishes after centering");

    GammaPowers powers(target, opts.variant);
    Poly v0 = target.embed_centered(p0);
    Sweep sweep(target, m, opts.variant, powers, v0);
    try {
        for (int T = 1; T <= T_max; ++T) {
            check_deadline(opts.deadline);
            sweep.step();
            if (sweep.feasible()) {
                res.solutions.push_back(
                    finish_solution(target, powers, p0, sweep.rhs(), T, m, opts.want_nullspace, opts.variant));
                res.status = FindStatus::found;
                if (!opts.all_horizons) return res;
            }
        }
    } catch (const Timeout&) {
        res.status = res.solutions.empty() ? FindStatus::timed_out : res.status;
        return res;
    }
    if (res.solutions.empty()) res.status = FindStatus::not_reachable;
    return res;
}

CombineResult combine_generic_zero_order(const TargetSpec& target, unsigned m0, int T_max, int m,
                                         const FindOptions& opts) {
    if (m0 == 0) throw std::invalid_argument("combine: m0 must be positive");
    std::vector<ControlSolution> runs;
    for (unsigned k = 1; k <= m0; ++k) {
        FindOptions single = opts;
        single.all_horizons = false;
        FindResult r = find_null_control(target, T_max, m, ZeroOrder::monomial(k), single);
        if (r.status != FindStatus::found) throw std::runtime_error("combine: monomial search k=" + std::to_string(k) +
                                                                    " found no operator within the bounds");
        runs.push_back(r.best());
    }
    int T_star = 0;
    for (const auto& r : runs) T_star = std::max(T_star, r.T);

    // pad every run to order T_star (zero tails keep the chain exact) and take
    // the shared nullspace from the homogeneous horizon-T_star system
    GammaPowers powers(target, opts.variant);
    Poly zero_rhs(target.d);
    HorizonSystem sys = assemble(powers, m, T_star, zero_rhs);
    std::vector<std::vector<Rational>> null_basis = kernel(sys.A);

    // top blocks in the centered variable so they stack with the nullspace
    Poly y_plus_shift = Poly::variable(1, 0) + Poly::constant(1, target.centered_shift);
    auto top_block = [&](const ControlSolution& r) {
        if (r.T != T_star) return Poly(1);
        return compose_univariate(r.coeffs.back(), y_plus_shift);
    };

    // stacked matrix: coefficient slots of the top block; columns are the m0
    // operators followed by the nullspace directions
    int top_deg = m;
    for (const auto& r : runs) {
        if (auto d = top_block(r).degree()) top_deg = std::max(top_deg, *d);
    }
    size_t rows = static_cast<size_t>(top_deg) + 1;
    size_t opcols = runs.size();
    RationalMatrix S(rows, opcols + null_basis.size());
    for (size_t c = 0; c < opcols; ++c) {
        Poly top = top_block(runs[c]);
        for (const auto& [mi, v] : top.terms()) S.at(mi.e[0], c) = v;
    }
    for (size_t n = 0; n < null_basis.size(); ++n) {
        std::vector<Poly> dirs = blocks_to_polys(null_basis[n], T_star, m);
        for (const auto& [mi, v] : dirs.back().terms()) S.at(mi.e[0], opcols + n) = v;
    }
    std::vector<std::vector<Rational>> ker = kernel(S);

    const std::vector<Rational>* chosen = nullptr;
    for (const auto& v : ker) {
        for (size_t c = 0; c < opcols; ++c) {
            if (!v[c].is_zero()) {
                chosen = &v;
                break;
            }
        }
        if (chosen) break;
    }
    if (!chosen) {
        // no reducing combination: hand back the best single run
        size_t best = 0;
        for (size_t i = 1; i < runs.size(); ++i) {
            if (runs[i].T < runs[best].T) best = i;
        }
        return {false, runs[best]};
    }

    Poly p0_combined(1);
    for (size_t c = 0; c < opcols; ++c) {
        if (!(*chosen)[c].is_zero()) p0_combined += (*chosen)[c] * runs[c].coeffs.front();
    }
    if (p0_combined.is_zero()) throw std::logic_error("combine: zero-order term of the combination vanished");

    FindOptions re = opts;
    re.all_horizons = false;
    int m_reduced = m;
    if (auto d0 = p0_combined.degree()) m_reduced = std::max(m_reduced, *d0);
    FindResult reduced = find_null_control(target, T_star - 1, m_reduced, ZeroOrder::explicit_poly(p0_combined), re);
    if (reduced.status != FindStatus::found)
        throw std::logic_error("combine: reduced horizon lost feasibility");
    return {true, reduced.best()};
}

std::optional<int> first_feasible_horizon(const TargetSpec& target, SearchMode mode, int m, int t_cap,
                                          GammaVariant variant,
                                          std::optional<std::chrono::steady_clock::time_point> deadline) {
    GammaPowers powers(target, variant);
    Poly p0 = Poly::variable(1, 0);
    Sweep sweep(target, m, variant, powers, target.embed_centered(p0));
    try {
        for (int T = 1; T <= t_cap; ++T) {
            check_deadline(deadline);
            sweep.step();
            if (mode == SearchMode::cy ? sweep.feasible() : sweep.feasible_general()) return T;
        }
    } catch (const Timeout&) {
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<PairTM> search_min_order(const TargetSpec& target, SearchMode mode, const SearchCaps& caps,
                                       GammaVariant variant) {
    auto T = first_feasible_horizon(target, mode, caps.m_cap, caps.t_cap, variant, caps.deadline);
    if (!T) return std::nullopt;
    // smallest feasible degree at that horizon, by bisection (monotone in m)
    int lo = mode == SearchMode::general ? 1 : 0, hi = caps.m_cap;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        auto t = first_feasible_horizon(target, mode, mid, *T, variant, caps.deadline);
        if (t) hi = mid;
        else lo = mid + 1;
    }
    // the zero-order term cy contributes degree 1 to the maximal degree
    if (mode == SearchMode::cy) lo = std::max(lo, 1);
    return PairTM{*T, lo};
}

std::optional<PairTM> search_min_degree(const TargetSpec& target, SearchMode mode, const SearchCaps& caps,
                                        GammaVariant variant) {
    int lo = mode == SearchMode::general ? 1 : 0, hi = caps.m_cap;
    if (!first_feasible_horizon(target, mode, hi, caps.t_cap, variant, caps.deadline)) return std::nullopt;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (first_feasible_horizon(target, mode, mid, caps.t_cap, variant, caps.deadline)) hi = mid;
        else lo = mid + 1;
    }
    auto T = first_feasible_horizon(target, mode, lo, caps.t_cap, variant, caps.deadline);
    if (mode == SearchMode::cy) lo = std::max(lo, 1);
    return PairTM{*T, lo};
}

}  // namespace stein
