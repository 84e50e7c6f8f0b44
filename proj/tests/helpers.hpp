#ifndef STEIN_TESTS_HELPERS_HPP
#define STEIN_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "stein/poly.hpp"
#include "stein/poly_text.hpp"

namespace stein::testing {

inline Poly yp(const std::string& s) { return parse_poly_y(s); }
inline Poly xp(const std::string& s, int min_vars = 1) { return parse_poly_x(s, min_vars); }

// Small random polynomials for property tests; deterministic per seed.
class PolyGen {
  public:
    explicit PolyGen(unsigned seed) : rng_(seed) {}

    Rational rational(long lo = -9, long hi = 9) {
        std::uniform_int_distribution<long> num(lo, hi);
        std::uniform_int_distribution<long> den(1, 4);
        return Rational(num(rng_), static_cast<unsigned long>(den(rng_)));
    }

    Poly poly(int nvars, int max_degree, int terms = 6) {
        Poly p(nvars);
        std::uniform_int_distribution<int> tcount(1, terms);
        std::uniform_int_distribution<int> deg(0, max_degree);
        int n = tcount(rng_);
        for (int i = 0; i < n; ++i) {
            MultiIndex m = MultiIndex::zeros(nvars);
            int budget = deg(rng_);
            std::uniform_int_distribution<int> var(0, nvars - 1);
            for (int j = 0; j < budget; ++j) m.e[static_cast<size_t>(var(rng_))] += 1;
            p.add_term(std::move(m), rational());
        }
        return p;
    }

    int integer(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(rng_);
    }

  private:
    std::mt19937 rng_;
};

}  // namespace stein::testing

#endif
