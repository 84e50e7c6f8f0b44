#ifndef STEIN_DOCUMENT_HPP
#define STEIN_DOCUMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "stein/chain.hpp"
#include "stein/control.hpp"

namespace stein {

struct VerificationBlock {
    bool replay_residual_zero = false;
    bool moment_defects_zero = false;
    int stein_identity_k = 0;  // largest k checked; all defects zero up to it
    bool backward_ok = false;  // vacuously true for multivariate targets
};

// Serialized operator: schema "stein-operator/1". Polynomials travel as text
// in the shared grammar so documents round-trip bit-exactly.
struct OperatorDocument {
    std::string schema_version = "stein-operator/1";
    std::string provenance = "user";
    int d = 1;
    std::string target_h;  // grammar, x-variables
    Rational centered_shift;
    std::string zero_order_mode = "explicit";
    int T = 0;
    int m = 0;
    std::vector<std::string> coefficients;        // p_0..p_T, grammar in y
    size_t nullspace_dimension = 0;
    std::vector<std::vector<std::string>> basis;  // each: T+1 strings
    VerificationBlock verification;
    std::optional<double> timing_ms;
};

std::string document_to_json(const OperatorDocument& doc);
OperatorDocument document_from_json(const std::string& text);  // throws std::invalid_argument

// Rebuilds the operator (and target) from a document.
SteinOperator operator_from_document(const OperatorDocument& doc);

OperatorDocument document_from_solution(const TargetSpec& target, const ControlSolution& sol,
                                        const std::string& zero_order_mode, Provenance prov);

// "(192*y^2+576*y-3456)*D^3+...+y": descending derivative order.
std::string render_symbolic(const std::vector<Poly>& coeffs);

// "y - (2\,y + 2)\partial": ascending derivative order, appendix layout.
std::string render_latex(const std::vector<Poly>& coeffs);

// Runs the full validation suite and fills a verification block; `ok` is the
// conjunction of every check.
VerificationBlock run_verification(const SteinOperator& op, bool* ok = nullptr);

}  // namespace stein

#endif
