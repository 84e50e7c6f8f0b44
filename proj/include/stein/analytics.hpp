#ifndef STEIN_ANALYTICS_HPP
#define STEIN_ANALYTICS_HPP

#include <complex>
#include <string>
#include <vector>

#include "stein/chain.hpp"
#include "stein/poly.hpp"

namespace stein {

// Exact complex rational a + b*i.
struct GaussRational {
    Rational re, im;

    GaussRational() = default;
    GaussRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
    static GaussRational unit_power(int k);  // i^k, k may be negative

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b);
    friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
    std::string str() const;
};

// Homogeneous linear ODE satisfied by the characteristic function of the
// target: sum_i coeff[i](t) phi^{(i)}(t) = 0, with coeff[i](t) =
// sum_j a_{i,j} i^{j-i} t^j read off the operator (a_{i,j}: coefficient of
// y^i in p_j). Stored with exact Gaussian-rational coefficients, scaled to
// Gaussian integers with content 1 and a canonical unit phase.
struct CharFnODE {
    int order = 0;                                   // y-degree m of the operator
    std::vector<std::vector<GaussRational>> coeffs;  // coeffs[i][j]: t^j term of the phi^{(i)} coefficient

    std::string latex() const;
};

CharFnODE charfn_ode(const SteinOperator& op);

// E[sum_t p_t(Y) (y^k)^{(t)}(Y)] for k = 0..K; all zero for a Stein operator.
std::vector<Rational> stein_identity_check(const SteinOperator& op, int K);

// Laurent classification at t = 0 of p(t) = coeff[1](t)/coeff[2](t) for
// second-order ODEs: condition `odd_pole`: pole order alpha >= 3 odd with
// real positive limit p0 of t^alpha p(t); condition `order_two_pole`:
// p(t) ~ a*i/t^2 + b/t with real a != 0 and real b >= -2.
struct PoleClassification {
    enum class Kind { odd_pole, order_two_pole, none } kind = Kind::none;
    int alpha = 0;
    Rational p0;    // odd_pole
    Rational a, b;  // order_two_pole
};

PoleClassification charfn_pole_classify(const CharFnODE& ode);

struct ResidualReport {
    double max_residual = 0.0;
    bool converged = true;  // doubling the node count moved it by <= 10%
};

// Numeric confirmation: evaluates the ODE residual at the sample points with
// phi^{(i)}(t) = i^i E[Y^i e^{itY}] computed by Gauss-Hermite quadrature,
// normalized by the largest term magnitude.
ResidualReport charfn_residual(const SteinOperator& op, const std::vector<double>& t_samples,
                               unsigned quad_nodes = 200);

enum class GammaIdentity { H3_fifth_order, H3_fourth_order, H4_third_order };

// Exact residual of the displayed combinations of iterated Gamma operators;
// identically zero for the true constants.
Poly gamma_characterization_check(GammaIdentity which);

}  // namespace stein

#endif
