#ifndef STEIN_POLY_HPP
#define STEIN_POLY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stein/rational.hpp"

namespace stein {

// Exponent vector of a monomial. Length always equals the ambient variable
// count of the polynomial it lives in.
struct MultiIndex {
    std::vector<unsigned> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<unsigned> exps) : e(std::move(exps)) {}
    static MultiIndex zeros(int nvars) { return MultiIndex(std::vector<unsigned>(nvars, 0)); }
    static MultiIndex unit(int nvars, int k, unsigned power = 1) {
        MultiIndex m = zeros(nvars);
        m.e[static_cast<size_t>(k)] = power;
        return m;
    }

    unsigned total() const {
        unsigned t = 0;
        for (unsigned v : e) t += v;
        return t;
    }
    size_t size() const { return e.size(); }
    unsigned operator[](size_t k) const { return e[k]; }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e < b.e; }
};

// Sparse multivariate polynomial over Rational in the monomial basis. No zero
// coefficients are stored; the degree of the zero polynomial is reported as
// an empty optional rather than a sentinel integer.
class Poly {
  public:
    explicit Poly(int nvars = 1) : nvars_(nvars) {}

    static Poly constant(int nvars, Rational c) {
        Poly p(nvars);
        p.add_term(MultiIndex::zeros(nvars), std::move(c));
        return p;
    }
    static Poly variable(int nvars, int k) {
        Poly p(nvars);
        p.add_term(MultiIndex::unit(nvars, k), Rational(1));
        return p;
    }
    static Poly monomial(MultiIndex m, Rational c) {
        Poly p(static_cast<int>(m.size()));
        p.add_term(std::move(m), std::move(c));
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::optional<int> degree() const;
    size_t term_count() const { return terms_.size(); }
    const std::map<MultiIndex, Rational>& terms() const { return terms_; }

    Rational coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const { return coeff(MultiIndex::zeros(nvars_)); }

    void add_term(MultiIndex m, const Rational& c);

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly p, const Rational& c);
    friend Poly operator*(const Rational& c, Poly p) { return std::move(p) * c; }
    Poly operator-() const { return *this * Rational(-1); }
    friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned n) const;

    // Formal partial derivative with respect to variable k (0-based).
    Poly partial(int k) const;

    double eval_double(const std::vector<double>& x) const;

    // Univariate access, ascending degree; requires nvars == 1.
    std::vector<Rational> dense_coeffs() const;
    static Poly from_dense(const std::vector<Rational>& coeffs);

  private:
    int nvars_;
    std::map<MultiIndex, Rational> terms_;
};

// Polynomial vector (one component per variable of the ambient ring).
struct PolyVector {
    std::vector<Poly> comps;

    PolyVector() = default;
    explicit PolyVector(int d, int nvars) : comps(static_cast<size_t>(d), Poly(nvars)) {}
    size_t size() const { return comps.size(); }
    Poly& operator[](size_t k) { return comps[k]; }
    const Poly& operator[](size_t k) const { return comps[k]; }
    friend bool operator==(const PolyVector& a, const PolyVector& b) { return a.comps == b.comps; }
};

// p(h) for univariate p, by Horner evaluation in the polynomial ring.
Poly compose_univariate(const Poly& p, const Poly& h);

// Scales a coefficient sequence by a single rational so all coefficients are
// integers with overall content 1 and the first nonzero coefficient (lowest
// sequence index, then lowest degree) is positive. Returns the scaled
// sequence and the applied scale. Throws on an all-zero sequence.
std::pair<std::vector<Poly>, Rational> content_normalize(const std::vector<Poly>& seq);

}  // namespace stein

#endif
