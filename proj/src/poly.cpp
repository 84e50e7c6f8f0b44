#include "stein/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace stein {

std::optional<int> Poly::degree() const {
    if (terms_.empty()) return std::nullopt;
    unsigned best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, m.total());
    return static_cast<int>(best);
}

void Poly::add_term(MultiIndex m, const Rational& c) {
    if (c.is_zero()) return;
    if (m.size() != static_cast<size_t>(nvars_)) throw std::invalid_argument("multi-index arity mismatch");
    auto [it, fresh] = terms_.try_emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable-count mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable-count mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable-count mismatch");
    Poly out(a.nvars_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            MultiIndex m = ma;
            for (size_t k = 0; k < m.e.size(); ++k) m.e[k] += mb.e[k];
            out.add_term(std::move(m), ca * cb);
        }
    }
    return out;
}

Poly operator*(Poly p, const Rational& c) {
    if (c.is_zero()) return Poly(p.nvars_);
    for (auto& [m, v] : p.terms_) v *= c;
    return p;
}

Poly Poly::pow(unsigned n) const {
    Poly out = Poly::constant(nvars_, Rational(1));
    for (unsigned i = 0; i < n; ++i) out = out * (*this);
    return out;
}

Poly Poly::partial(int k) const {
    if (k < 0 || k >= nvars_) throw std::out_of_range("partial: variable index out of range");
    Poly out(nvars_);
    for (const auto& [m, c] : terms_) {
        unsigned e = m.e[static_cast<size_t>(k)];
        if (e == 0) continue;
        MultiIndex d = m;
        d.e[static_cast<size_t>(k)] = e - 1;
        out.add_term(std::move(d), c * Rational(static_cast<long>(e)));
    }
    return out;
}

double Poly::eval_double(const std::vector<double>& x) const {
    double acc = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (size_t k = 0; k < m.e.size(); ++k) t *= std::pow(x[k], static_cast<int>(m.e[k]));
        acc += t;
    }
    return acc;
}

std::vector<Rational> Poly::dense_coeffs() const {
    if (nvars_ != 1) throw std::logic_error("dense_coeffs requires a univariate polynomial");
    auto d = degree();
    std::vector<Rational> out(d ? static_cast<size_t>(*d) + 1 : 1, Rational(0));
    for (const auto& [m, c] : terms_) out[m.e[0]] = c;
    return out;
}

Poly Poly::from_dense(const std::vector<Rational>& coeffs) {
    Poly p(1);
    for (size_t i = 0; i < coeffs.size(); ++i) p.add_term(MultiIndex({static_cast<unsigned>(i)}), coeffs[i]);
    return p;
}

Poly compose_univariate(const Poly& p, const Poly& h) {
    if (p.nvars() != 1) throw std::invalid_argument("compose: outer polynomial must be univariate");
    std::vector<Rational> c = p.dense_coeffs();
    Poly acc(h.nvars());
    for (size_t i = c.size(); i-- > 0;) {
        acc = acc * h;
        acc += Poly::constant(h.nvars(), c[i]);
    }
    return acc;
}

std::pair<std::vector<Poly>, Rational> content_normalize(const std::vector<Poly>& seq) {
    mpz_t den_lcm, num_gcd, tmp;
    mpz_init_set_ui(den_lcm, 1);
    mpz_init_set_ui(num_gcd, 0);
    mpz_init(tmp);
    bool any = false;
    for (const auto& p : seq) {
        for (const auto& [m, c] : p.terms()) {
            any = true;
            mpz_lcm(den_lcm, den_lcm, mpq_denref(c.raw()));
        }
    }
    if (!any) {
        mpz_clears(den_lcm, num_gcd, tmp, nullptr);
        throw std::invalid_argument("content_normalize: all-zero input");
    }
    for (const auto& p : seq) {
        for (const auto& [m, c] : p.terms()) {
            // numerator of c * den_lcm, always an integer
            mpz_divexact(tmp, den_lcm, mpq_denref(c.raw()));
            mpz_mul(tmp, tmp, mpq_numref(c.raw()));
            mpz_gcd(num_gcd, num_gcd, tmp);
        }
    }
    Rational scale;
    mpz_set(mpq_numref(scale.raw()), den_lcm);
    mpz_set(mpq_denref(scale.raw()), num_gcd);
    mpq_canonicalize(scale.raw());
    mpz_clears(den_lcm, num_gcd, tmp, nullptr);

    // Sign convention: first nonzero coefficient (lowest index, then lowest
    // degree) ends up positive.
    for (const auto& p : seq) {
        if (p.is_zero()) continue;
        if (p.terms().begin()->second.sign() * scale.sign() < 0) scale = -scale;
        break;
    }
    std::vector<Poly> out;
    out.reserve(seq.size());
    for (const auto& p : seq) out.push_back(p * scale);
    return {std::move(out), std::move(scale)};
}

}  // namespace stein
