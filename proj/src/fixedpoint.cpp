#include "fixedpoint.hpp"

#include <stdexcept>

#include "stein/numeric.hpp"

namespace stein::fp {

namespace {

// 3.14159... as an integer string over 10^120
const char* kPiDigits =
    "3"
    "14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647";

Fixed exp_neg_fraction(const Fixed& frac) {
    Fixed term(1.0), sum(1.0);
    for (unsigned long n = 1; n < 600; ++n) {
        term = (term * frac).div_ui(n);
        if (n % 2 == 1) sum -= term;
        else sum += term;
        if (term.raw_bits_below(8)) break;
    }
    return sum;
}

}  // namespace

const Fixed& fixed_pi() {
    static const Fixed pi = Fixed::from_decimal_fraction(kPiDigits, 120);
    return pi;
}

Fixed fixed_exp_neg(const Fixed& r) {
    if (r.is_negative()) throw std::invalid_argument("fixed_exp_neg: negative argument");
    long k = r.floor_long();
    Fixed sum = exp_neg_fraction(r - Fixed(static_cast<double>(k)));
    if (k > 0) {
        static const Fixed e_inv = [] {
            Fixed root = exp_neg_fraction(Fixed(0.5));
            return root * root;
        }();
        Fixed power(1.0), base = e_inv;
        auto kk = static_cast<unsigned long>(k);
        while (kk > 0) {
            if (kk & 1) power *= base;
            base *= base;
            kk >>= 1;
        }
        sum *= power;
    }
    return sum;
}

void fixed_sincos(const Fixed& theta, Fixed& s, Fixed& c) {
    const Fixed& pi = fixed_pi();
    long q = (theta / pi).round_long();
    Fixed reduced = theta - pi * Fixed(static_cast<double>(q));
    // reduced in [-pi/2, pi/2]; the two series share the squared argument
    Fixed x2 = reduced * reduced;
    Fixed sin_term = reduced, cos_term(1.0);
    Fixed sin_sum = reduced, cos_sum(1.0);
    for (unsigned long n = 1; n < 300; ++n) {
        cos_term = (cos_term * x2).div_ui(2 * n - 1).div_ui(2 * n);
        if (n % 2 == 1) cos_sum -= cos_term;
        else cos_sum += cos_term;
        sin_term = (sin_term * x2).div_ui(2 * n).div_ui(2 * n + 1);
        if (n % 2 == 1) sin_sum -= sin_term;
        else sin_sum += sin_term;
        if (cos_term.raw_bits_below(8) && sin_term.raw_bits_below(8)) break;
    }
    if (q % 2 != 0) {
        sin_sum = -sin_sum;
        cos_sum = -cos_sum;
    }
    s = std::move(sin_sum);
    c = std::move(cos_sum);
}

const FixedQuadrature& fixed_gauss_legendre_12() {
    static const FixedQuadrature rule = [] {
        const unsigned n = 12;
        Quadrature seed = gauss_legendre(n);
        FixedQuadrature out;
        for (unsigned i = 0; i < n; ++i) {
            Fixed x(seed.nodes[i]);
            Fixed dp;
            for (int step = 0; step < 6; ++step) {
                // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
                Fixed p0(1.0), p1 = x;
                for (unsigned k = 1; k < n; ++k) {
                    Fixed p2 = (Fixed(static_cast<double>(2 * k + 1)) * x * p1 -
                                Fixed(static_cast<double>(k)) * p0)
                                   .div_ui(k + 1);
                    p0 = std::move(p1);
                    p1 = std::move(p2);
                }
                Fixed denom = x * x - Fixed(1.0);
                dp = Fixed(static_cast<double>(n)) * (x * p1 - p0) / denom;
                x -= p1 / dp;
            }
            Fixed denom = (Fixed(1.0) - x * x) * dp * dp;
            out.nodes.push_back(x);
            out.weights.push_back(Fixed(2.0) / denom);
        }
        return out;
    }();
    return rule;
}

}  // namespace stein::fp
