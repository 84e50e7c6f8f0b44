#ifndef STEIN_SRC_FIXEDPOINT_HPP
#define STEIN_SRC_FIXEDPOINT_HPP

#include <gmp.h>

#include <cmath>
#include <utility>
#include <vector>

namespace stein::fp {

// Fixed-point real number over GMP integers with FRAC_BITS fractional bits.
// The verification integrals for high-degree targets cancel through ~70
// decimal digits, far beyond any hardware float; the absolute-error model of
// fixed point (one ulp of 2^-FRAC_BITS per operation, exact addition) is
// exactly what those accumulations need.
class Fixed {
  public:
    static constexpr long FRAC_BITS = 352;

    Fixed() { mpz_init(v_); }
    explicit Fixed(double x) {
        mpz_init(v_);
        set_double(x);
    }
    Fixed(const Fixed& o) { mpz_init_set(v_, o.v_); }
    Fixed(Fixed&& o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    Fixed& operator=(const Fixed& o) {
        if (this != &o) mpz_set(v_, o.v_);
        return *this;
    }
    Fixed& operator=(Fixed&& o) noexcept {
        if (this != &o) mpz_swap(v_, o.v_);
        return *this;
    }
    ~Fixed() { mpz_clear(v_); }

    void set_double(double x) {
        int e;
        double mant = std::frexp(x, &e);
        auto m53 = static_cast<long long>(std::ldexp(mant, 53));
        mpz_set_sx(m53);
        long shift = FRAC_BITS + e - 53;
        if (shift >= 0) mpz_mul_2exp(v_, v_, static_cast<unsigned long>(shift));
        else mpz_fdiv_q_2exp(v_, v_, static_cast<unsigned long>(-shift));
    }

    // value = digits / 10^frac_digits, digits a plain decimal integer string
    static Fixed from_decimal_fraction(const char* digits, unsigned long frac_digits) {
        Fixed out;
        mpz_t d, p;
        mpz_init_set_str(d, digits, 10);
        mpz_init(p);
        mpz_ui_pow_ui(p, 10, frac_digits);
        mpz_mul_2exp(out.v_, d, FRAC_BITS);
        mpz_fdiv_q(out.v_, out.v_, p);
        mpz_clears(d, p, nullptr);
        return out;
    }

    static Fixed from_rational(mpq_srcptr q) {
        Fixed out;
        mpz_mul_2exp(out.v_, mpq_numref(q), FRAC_BITS);
        mpz_fdiv_q(out.v_, out.v_, mpq_denref(q));
        return out;
    }

    Fixed sqrt() const {  // requires a non-negative value
        Fixed r;
        mpz_mul_2exp(r.v_, v_, FRAC_BITS);
        mpz_sqrt(r.v_, r.v_);
        return r;
    }

    double to_double() const {
        long double d = mpz_get_d(v_);  // magnitude fits a double for our uses
        signed long exp2 = 0;
        // handle very large magnitudes through mpz_get_d_2exp
        double mant = mpz_get_d_2exp(&exp2, v_);
        (void)d;
        return std::ldexp(mant, static_cast<int>(exp2 - FRAC_BITS));
    }

    bool is_negative() const { return mpz_sgn(v_) < 0; }
    bool is_zero() const { return mpz_sgn(v_) == 0; }
    // raw representation smaller than 2^bits, i.e. value below 2^(bits - FRAC_BITS)
    bool raw_bits_below(size_t bits) const { return mpz_sgn(v_) == 0 || mpz_sizeinbase(v_, 2) < bits; }

    Fixed& operator+=(const Fixed& o) {
        mpz_add(v_, v_, o.v_);
        return *this;
    }
    Fixed& operator-=(const Fixed& o) {
        mpz_sub(v_, v_, o.v_);
        return *this;
    }
    friend Fixed operator+(Fixed a, const Fixed& b) { return a += b; }
    friend Fixed operator-(Fixed a, const Fixed& b) { return a -= b; }
    Fixed operator-() const {
        Fixed r;
        mpz_neg(r.v_, v_);
        return r;
    }

    friend Fixed operator*(const Fixed& a, const Fixed& b) {
        Fixed r;
        mpz_mul(r.v_, a.v_, b.v_);
        mpz_fdiv_q_2exp(r.v_, r.v_, FRAC_BITS);
        return r;
    }
    Fixed& operator*=(const Fixed& o) { return *this = *this * o; }

    friend Fixed operator/(const Fixed& a, const Fixed& b) {
        Fixed r;
        mpz_mul_2exp(r.v_, a.v_, FRAC_BITS);
        mpz_fdiv_q(r.v_, r.v_, b.v_);
        return r;
    }

    Fixed div_ui(unsigned long n) const {
        Fixed r;
        mpz_fdiv_q_ui(r.v_, v_, n);
        return r;
    }

    Fixed mul_2exp(long k) const {
        Fixed r;
        if (k >= 0) mpz_mul_2exp(r.v_, v_, static_cast<unsigned long>(k));
        else mpz_fdiv_q_2exp(r.v_, v_, static_cast<unsigned long>(-k));
        return r;
    }

    // nearest integer (as a plain long); |value| must fit
    long round_long() const {
        mpz_t t;
        mpz_init_set(t, v_);
        mpz_t half;
        mpz_init_set_ui(half, 1);
        mpz_mul_2exp(half, half, FRAC_BITS - 1);
        mpz_add(t, t, half);
        mpz_fdiv_q_2exp(t, t, FRAC_BITS);
        long out = mpz_get_si(t);
        mpz_clears(t, half, nullptr);
        return out;
    }

    long floor_long() const {
        mpz_t t;
        mpz_init(t);
        mpz_fdiv_q_2exp(t, v_, FRAC_BITS);
        long out = mpz_get_si(t);
        mpz_clear(t);
        return out;
    }

  private:
    void mpz_set_sx(long long x) {
        if (x >= 0) {
            mpz_set_ui(v_, static_cast<unsigned long>(x));
        } else {
            mpz_set_ui(v_, static_cast<unsigned long>(-x));
            mpz_neg(v_, v_);
        }
    }
    mpz_t v_;
};

// pi to full working precision, from its decimal expansion
const Fixed& fixed_pi();

// exp(-r) for r >= 0
Fixed fixed_exp_neg(const Fixed& r);

// sin and cos with full argument reduction
void fixed_sincos(const Fixed& theta, Fixed& s, Fixed& c);

// Gauss-Legendre rule on [-1, 1] at working precision
struct FixedQuadrature {
    std::vector<Fixed> nodes;
    std::vector<Fixed> weights;
};
const FixedQuadrature& fixed_gauss_legendre_12();

}  // namespace stein::fp

#endif
