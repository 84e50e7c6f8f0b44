#ifndef STEIN_RATIONAL_HPP
#define STEIN_RATIONAL_HPP

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace stein {

// Arbitrary-precision rational scalar. Always stored reduced with a positive
// denominator; zero is 0/1. Every operation is exact.
class Rational {
  public:
    Rational() { mpq_init(q_); }
    Rational(long n) {
        mpq_init(q_);
        mpq_set_si(q_, n, 1);
    }
    Rational(int n) : Rational(static_cast<long>(n)) {}
    Rational(long num, unsigned long den) {
        mpq_init(q_);
        mpq_set_si(q_, num, den);
        mpq_canonicalize(q_);
    }
    // Parses "123", "-4/5". Throws std::invalid_argument on malformed input.
    explicit Rational(const std::string& s);

    Rational(const Rational& o) {
        mpq_init(q_);
        mpq_set(q_, o.q_);
    }
    Rational(Rational&& o) noexcept {
        mpq_init(q_);
        mpq_swap(q_, o.q_);
    }
    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept {
        if (this != &o) mpq_swap(q_, o.q_);
        return *this;
    }
    ~Rational() { mpq_clear(q_); }

    bool is_zero() const { return mpq_sgn(q_) == 0; }
    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
    int sign() const { return mpq_sgn(q_); }

    Rational& operator+=(const Rational& o) {
        mpq_add(q_, q_, o.q_);
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        mpq_sub(q_, q_, o.q_);
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        mpq_mul(q_, q_, o.q_);
        return *this;
    }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const {
        Rational r;
        mpq_neg(r.q_, q_);
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const {
        Rational r;
        mpq_abs(r.q_, q_);
        return r;
    }
    Rational inverse() const;

    // Inverse of the canonical string form: "n" when integral, else "n/d".
    std::string str() const;
    double to_double() const { return mpq_get_d(q_); }

    std::string numerator_str() const;
    std::string denominator_str() const;

    // Exact n!, n!!, C(n,k) as rationals (integers with denominator 1).
    static Rational factorial(unsigned long n);
    static Rational double_factorial(unsigned long n);
    static Rational binomial(unsigned long n, unsigned long k);

    // Raw handle; used by the exact linear algebra for content/lcm work.
    mpq_srcptr raw() const { return q_; }
    mpq_ptr raw() { return q_; }

  private:
    mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace stein

#endif
