#include "stein/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace stein {

namespace {

// Scales a row to integer entries with content 1, keeping signs.
void row_reduce_content(std::vector<Rational>& row) {
    mpz_t den_lcm, num_gcd, tmp;
    mpz_init_set_ui(den_lcm, 1);
    mpz_init_set_ui(num_gcd, 0);
    mpz_init(tmp);
    bool any = false;
    for (const auto& v : row) {
        if (v.is_zero()) continue;
        any = true;
        mpz_lcm(den_lcm, den_lcm, mpq_denref(v.raw()));
    }
    if (any) {
        for (const auto& v : row) {
            if (v.is_zero()) continue;
            mpz_divexact(tmp, den_lcm, mpq_denref(v.raw()));
            mpz_mul(tmp, tmp, mpq_numref(v.raw()));
            mpz_gcd(num_gcd, num_gcd, tmp);
        }
        Rational scale;
        mpz_set(mpq_numref(scale.raw()), den_lcm);
        mpz_set(mpq_denref(scale.raw()), num_gcd);
        mpq_canonicalize(scale.raw());
        for (auto& v : row) v *= scale;
    }
    mpz_clears(den_lcm, num_gcd, tmp, nullptr);
}

struct Find {
    std::vector<size_t> parent;
    explicit Find(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t root(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[root(a)] = root(b); }
};

struct Component {
    std::vector<size_t> rows;
    std::vector<size_t> cols;
};

struct CompResult {
    std::vector<size_t> pivot_cols;                              // global column indices, ascending
    std::vector<std::pair<size_t, std::vector<Rational>>> free_cols;  // global free col -> -RREF column over pivots
};

// RREF of the subsystem given by (rows, cols) of [A|b]. Fills the relevant
// entries of `particular` and the component result. Returns false when the
// subsystem is inconsistent.
bool eliminate_component(const RationalMatrix& A, const std::vector<Rational>& b, const Component& comp,
                         bool want_nullspace, std::vector<Rational>& particular, CompResult& res, size_t& rank) {
    const size_t nr = comp.rows.size();
    const size_t nc = comp.cols.size();
    std::vector<std::vector<Rational>> M(nr, std::vector<Rational>(nc + 1));
    for (size_t i = 0; i < nr; ++i) {
        for (size_t j = 0; j < nc; ++j) M[i][j] = A.at(comp.rows[i], comp.cols[j]);
        M[i][nc] = b[comp.rows[i]];
        row_reduce_content(M[i]);
    }

    std::vector<size_t> pivot_row;  // pivot_row[q] holds column local_pivot[q]
    std::vector<size_t> local_pivot;
    size_t next_row = 0;
    for (size_t j = 0; j < nc && next_row < nr; ++j) {
        size_t r = next_row;
        while (r < nr && M[r][j].is_zero()) ++r;
        if (r == nr) continue;
        std::swap(M[next_row], M[r]);
        const std::vector<Rational> prow = M[next_row];
        for (size_t i = next_row + 1; i < nr; ++i) {
            if (M[i][j].is_zero()) continue;
            Rational f = M[i][j];
            for (size_t k = j; k <= nc; ++k) M[i][k] = M[i][k] * prow[j] - f * prow[k];
            row_reduce_content(M[i]);
        }
        local_pivot.push_back(j);
        pivot_row.push_back(next_row);
        ++next_row;
    }
    rank += local_pivot.size();

    for (size_t i = next_row; i < nr; ++i) {
        if (!M[i][nc].is_zero()) return false;
    }

    // back-substitution to reduced echelon form
    for (size_t q = local_pivot.size(); q-- > 0;) {
        size_t pr = pivot_row[q];
        size_t pc = local_pivot[q];
        Rational inv = M[pr][pc].inverse();
        for (size_t k = pc; k <= nc; ++k) M[pr][k] *= inv;
        for (size_t i = 0; i < pr; ++i) {
            if (M[i][pc].is_zero()) continue;
            Rational f = M[i][pc];
            for (size_t k = pc; k <= nc; ++k) M[i][k] -= f * M[pr][k];
        }
    }

    for (size_t q = 0; q < local_pivot.size(); ++q) {
        particular[comp.cols[local_pivot[q]]] = M[pivot_row[q]][nc];
        res.pivot_cols.push_back(comp.cols[local_pivot[q]]);
    }
    if (want_nullspace) {
        size_t q = 0;
        for (size_t j = 0; j < nc; ++j) {
            if (q < local_pivot.size() && local_pivot[q] == j) {
                ++q;
                continue;
            }
            std::vector<Rational> coef;
            coef.reserve(local_pivot.size());
            for (size_t t = 0; t < local_pivot.size(); ++t) coef.push_back(-M[pivot_row[t]][j]);
            res.free_cols.emplace_back(comp.cols[j], std::move(coef));
        }
    }
    return true;
}

}  // namespace

SolveOutcome solve_exact(const RationalMatrix& A, const std::vector<Rational>& b, bool want_nullspace) {
    if (b.size() != A.rows) throw std::invalid_argument("solve_exact: dimension mismatch");
    SolveOutcome out;
    out.particular.assign(A.cols, Rational(0));

    Find uf(A.rows + A.cols);  // rows first, then columns
    std::vector<bool> col_used(A.cols, false);
    std::vector<bool> row_has_col(A.rows, false);
    for (size_t j = 0; j < A.cols; ++j) {
        for (size_t i = 0; i < A.rows; ++i) {
            if (A.at(i, j).is_zero()) continue;
            col_used[j] = true;
            row_has_col[i] = true;
            uf.unite(i, A.rows + j);
        }
    }
    for (size_t i = 0; i < A.rows; ++i) {
        if (!row_has_col[i] && !b[i].is_zero()) return out;  // 0 = b_i
    }

    std::vector<Component> comps;
    std::vector<long> comp_of_root(A.rows + A.cols, -1);
    auto comp_index = [&](size_t node) {
        size_t r = uf.root(node);
        if (comp_of_root[r] < 0) {
            comp_of_root[r] = static_cast<long>(comps.size());
            comps.emplace_back();
        }
        return static_cast<size_t>(comp_of_root[r]);
    };
    for (size_t i = 0; i < A.rows; ++i) {
        if (row_has_col[i]) comps[comp_index(i)].rows.push_back(i);
    }
    std::vector<size_t> comp_of_col(A.cols, SIZE_MAX);
    for (size_t j = 0; j < A.cols; ++j) {
        if (!col_used[j]) continue;
        comp_of_col[j] = comp_index(A.rows + j);
        comps[comp_of_col[j]].cols.push_back(j);
    }

    std::vector<CompResult> results(comps.size());
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        if (!eliminate_component(A, b, comps[ci], want_nullspace, out.particular, results[ci], out.rank)) {
            return SolveOutcome{};
        }
    }

    if (want_nullspace) {
        std::vector<const std::vector<Rational>*> coef_of(A.cols, nullptr);
        for (const auto& res : results)
            for (const auto& [gcol, coef] : res.free_cols) coef_of[gcol] = &coef;
        for (size_t j = 0; j < A.cols; ++j) {
            if (col_used[j] && coef_of[j] == nullptr) continue;  // pivot column
            std::vector<Rational> v(A.cols, Rational(0));
            v[j] = Rational(1);
            if (col_used[j]) {
                const auto& pivots = results[comp_of_col[j]].pivot_cols;
                const auto& coef = *coef_of[j];
                for (size_t q = 0; q < pivots.size(); ++q) v[pivots[q]] = coef[q];
            }
            out.nullspace.push_back(std::move(v));
        }
    }
    out.solvable = true;
    return out;
}

std::vector<std::vector<Rational>> kernel(const RationalMatrix& A) {
    std::vector<Rational> zero(A.rows, Rational(0));
    return solve_exact(A, zero, true).nullspace;
}

}  // namespace stein
