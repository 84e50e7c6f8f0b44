#ifndef STEIN_POLY_TEXT_HPP
#define STEIN_POLY_TEXT_HPP

#include <string>

#include "stein/poly.hpp"

namespace stein {

// Text grammar shared by the CLI and the JSON documents: integer or rational
// coefficients, variables x1..xd (alias x when d = 1) or y, operators + - * ^.
// Parsing is exact; floating-point literals are rejected.

// Parses a polynomial in the x-variables; the ambient dimension is the
// largest variable index seen (at least min_vars, at least 1).
Poly parse_poly_x(const std::string& text, int min_vars = 1);

// Parses a univariate polynomial in y.
Poly parse_poly_y(const std::string& text);

// Canonical text form (descending degree, no spaces); parses back exactly.
std::string poly_to_string(const Poly& p, bool y_variable = false);

// LaTeX form of a univariate polynomial, e.g. "2\,y + 2".
std::string poly_to_latex(const Poly& p, const std::string& var = "y");

}  // namespace stein

#endif
