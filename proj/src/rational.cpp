#include "stein/rational.hpp"

#include <cstdlib>
#include <ostream>
#include <stdexcept>

namespace stein {

namespace {

std::string take_gmp_string(char* s) {
    std::string out(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, out.size() + 1);
    return out;
}

}  // namespace

Rational::Rational(const std::string& s) {
    mpq_init(q_);
    if (s.empty() || mpq_set_str(q_, s.c_str(), 10) != 0) {
        mpq_clear(q_);
        throw std::invalid_argument("malformed rational literal: '" + s + "'");
    }
    if (mpz_sgn(mpq_denref(q_)) == 0) {
        mpq_clear(q_);
        throw std::invalid_argument("zero denominator in rational literal: '" + s + "'");
    }
    mpq_canonicalize(q_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    mpq_div(q_, q_, o.q_);
    return *this;
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    Rational r;
    mpq_inv(r.q_, q_);
    return r;
}

std::string Rational::str() const { return take_gmp_string(mpq_get_str(nullptr, 10, q_)); }

std::string Rational::numerator_str() const { return take_gmp_string(mpz_get_str(nullptr, 10, mpq_numref(q_))); }

std::string Rational::denominator_str() const { return take_gmp_string(mpz_get_str(nullptr, 10, mpq_denref(q_))); }

Rational Rational::factorial(unsigned long n) {
    Rational r;
    mpz_fac_ui(mpq_numref(r.q_), n);
    return r;
}

Rational Rational::double_factorial(unsigned long n) {
    Rational r;
    mpz_2fac_ui(mpq_numref(r.q_), n);
    return r;
}

Rational Rational::binomial(unsigned long n, unsigned long k) {
    Rational r;
    mpz_bin_uiui(mpq_numref(r.q_), n, k);
    return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace stein
