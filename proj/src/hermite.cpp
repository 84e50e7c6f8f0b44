#include "stein/hermite.hpp"

#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace stein {

namespace {

// Triangular connection tables between the monomial and Hermite bases, grown
// on demand. Conversions dominate the multivariate pseudo-inverse cost, so
// rows are cached for the lifetime of the process. Concurrent readers share
// the lock; growth takes it exclusively.
class ConnectionTable {
  public:
    // x^n = sum_k mono_to_h(n)[k] * H_k(x)
    std::vector<Rational> mono_to_h(unsigned n) {
        ensure(n);
        std::shared_lock lock(mu_);
        return x_in_h_[n];
    }
    // H_n(x) = sum_k h_to_mono(n)[k] * x^k
    std::vector<Rational> h_to_mono(unsigned n) {
        ensure(n);
        std::shared_lock lock(mu_);
        return h_in_x_[n];
    }

  private:
    void ensure(unsigned n) {
        {
            std::shared_lock lock(mu_);
            if (n < x_in_h_.size()) return;
        }
        std::unique_lock lock(mu_);
        if (x_in_h_.empty()) {
            x_in_h_.push_back({Rational(1)});
            h_in_x_.push_back({Rational(1)});
        }
        while (x_in_h_.size() <= n) {
            size_t m = x_in_h_.size();
            // H_m = x*H_{m-1} - (m-1)*H_{m-2}
            std::vector<Rational> h(m + 1, Rational(0));
            const auto& prev = h_in_x_[m - 1];
            for (size_t k = 0; k < prev.size(); ++k) h[k + 1] += prev[k];
            if (m >= 2) {
                const auto& prev2 = h_in_x_[m - 2];
                Rational f(static_cast<long>(m - 1));
                for (size_t k = 0; k < prev2.size(); ++k) h[k] -= f * prev2[k];
            }
            h_in_x_.push_back(std::move(h));

            // x^m = x * x^{m-1}, using x*H_k = H_{k+1} + k*H_{k-1}
            std::vector<Rational> c(m + 1, Rational(0));
            const auto& cp = x_in_h_[m - 1];
            for (size_t k = 0; k < cp.size(); ++k) {
                if (cp[k].is_zero()) continue;
                c[k + 1] += cp[k];
                if (k >= 1) c[k - 1] += cp[k] * Rational(static_cast<long>(k));
            }
            x_in_h_.push_back(std::move(c));
        }
    }

    std::shared_mutex mu_;
    std::vector<std::vector<Rational>> x_in_h_;
    std::vector<std::vector<Rational>> h_in_x_;
};

ConnectionTable& table() {
    static ConnectionTable t;
    return t;
}

}  // namespace

Poly hermite(unsigned n) {
    auto row = table().h_to_mono(n);
    Poly p(1);
    for (size_t k = 0; k < row.size(); ++k) p.add_term(MultiIndex({static_cast<unsigned>(k)}), row[k]);
    return p;
}

HermiteExpansion to_hermite(const Poly& p) {
    HermiteExpansion out;
    out.nvars = p.nvars();
    for (const auto& [m, c] : p.terms()) {
        // tensor the per-variable expansions of x_k^{m_k}
        std::map<MultiIndex, Rational> acc;
        acc.emplace(MultiIndex::zeros(p.nvars()), c);
        for (size_t k = 0; k < m.size(); ++k) {
            if (m.e[k] == 0) continue;
            auto row = table().mono_to_h(m.e[k]);
            std::map<MultiIndex, Rational> next;
            for (const auto& [idx, v] : acc) {
                for (size_t j = 0; j < row.size(); ++j) {
                    if (row[j].is_zero()) continue;
                    MultiIndex w = idx;
                    w.e[k] = static_cast<unsigned>(j);
                    auto [it, fresh] = next.try_emplace(std::move(w), v * row[j]);
                    if (!fresh) it->second += v * row[j];
                }
            }
            acc = std::move(next);
        }
        for (auto& [idx, v] : acc) out.add_term(idx, v);
    }
    return out;
}

Poly from_hermite(const HermiteExpansion& e) {
    Poly out(e.nvars);
    for (const auto& [alpha, c] : e.terms) {
        Poly prod = Poly::constant(e.nvars, c);
        for (size_t k = 0; k < alpha.size(); ++k) {
            if (alpha.e[k] == 0) continue;
            auto row = table().h_to_mono(alpha.e[k]);
            Poly hk(e.nvars);
            for (size_t j = 0; j < row.size(); ++j) {
                if (row[j].is_zero()) continue;
                hk.add_term(MultiIndex::unit(e.nvars, static_cast<int>(k), static_cast<unsigned>(j)), row[j]);
            }
            prod = prod * hk;
        }
        out += prod;
    }
    return out;
}

Rational gaussian_moment(unsigned n) {
    if (n % 2 != 0) return Rational(0);
    if (n == 0) return Rational(1);
    return Rational::double_factorial(n - 1);
}

Rational expect(const Poly& p) {
    Rational acc(0);
    for (const auto& [m, c] : p.terms()) {
        Rational term = c;
        bool zero = false;
        for (unsigned e : m.e) {
            if (e % 2 != 0) {
                zero = true;
                break;
            }
            if (e > 0) term *= gaussian_moment(e);
        }
        if (!zero) acc += term;
    }
    return acc;
}

Rational expect_hermite_route(const Poly& p) {
    return to_hermite(p).coeff(MultiIndex::zeros(p.nvars()));
}

Rational cumulant(const Poly& h, unsigned n) {
    if (n == 0) throw std::invalid_argument("cumulant order must be >= 1");
    std::vector<Rational> mom(n + 1, Rational(1));  // mom[j] = E[h(X)^j]
    Poly power = Poly::constant(h.nvars(), Rational(1));
    for (unsigned j = 1; j <= n; ++j) {
        power = power * h;
        mom[j] = expect(power);
    }
    std::vector<Rational> kap(n + 1, Rational(0));
    for (unsigned j = 1; j <= n; ++j) {
        Rational k = mom[j];
        for (unsigned i = 1; i < j; ++i) k -= Rational::binomial(j - 1, i - 1) * kap[i] * mom[j - i];
        kap[j] = k;
    }
    return kap[n];
}

}  // namespace stein
