#include "stein/document.hpp"

#include <json.hpp>
#include <stdexcept>

#include "stein/analytics.hpp"
#include "stein/poly_text.hpp"

namespace stein {

namespace {

using json = nlohmann::ordered_json;

}  // namespace

std::string document_to_json(const OperatorDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["provenance"] = doc.provenance;
    j["target"] = json{{"d", doc.d}, {"h", doc.target_h}, {"centered_shift", doc.centered_shift.str()}};
    j["zero_order_mode"] = doc.zero_order_mode;
    j["T"] = doc.T;
    j["m"] = doc.m;
    j["coefficients"] = doc.coefficients;
    j["solution_space"] = json{{"nullspace_dimension", doc.nullspace_dimension}, {"basis", doc.basis}};
    j["verification"] = json{{"replay_residual_zero", doc.verification.replay_residual_zero},
                             {"moment_defects_zero", doc.verification.moment_defects_zero},
                             {"stein_identity_k", doc.verification.stein_identity_k},
                             {"backward_ok", doc.verification.backward_ok}};
    if (doc.timing_ms) j["timing"] = json{{"elapsed_ms", *doc.timing_ms}};
    else j["timing"] = nullptr;
    return j.dump(2) + "\n";
}

OperatorDocument document_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed document: ") + e.what());
    }
    OperatorDocument doc;
    try {
        doc.schema_version = j.at("schema_version").get<std::string>();
        if (doc.schema_version != "stein-operator/1")
            throw std::invalid_argument("unsupported schema_version " + doc.schema_version);
        doc.provenance = j.value("provenance", std::string("user"));
        doc.d = j.at("target").at("d").get<int>();
        doc.target_h = j.at("target").at("h").get<std::string>();
        doc.centered_shift = Rational(j.at("target").at("centered_shift").get<std::string>());
        doc.zero_order_mode = j.at("zero_order_mode").get<std::string>();
        doc.T = j.at("T").get<int>();
        doc.m = j.at("m").get<int>();
        doc.coefficients = j.at("coefficients").get<std::vector<std::string>>();
        doc.nullspace_dimension = j.at("solution_space").at("nullspace_dimension").get<size_t>();
        doc.basis = j.at("solution_space").at("basis").get<std::vector<std::vector<std::string>>>();
        const auto& v = j.at("verification");
        doc.verification.replay_residual_zero = v.at("replay_residual_zero").get<bool>();
        doc.verification.moment_defects_zero = v.at("moment_defects_zero").get<bool>();
        doc.verification.stein_identity_k = v.at("stein_identity_k").get<int>();
        doc.verification.backward_ok = v.at("backward_ok").get<bool>();
        if (j.contains("timing") && !j.at("timing").is_null())
            doc.timing_ms = j.at("timing").at("elapsed_ms").get<double>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed document: ") + e.what());
    }
    return doc;
}

SteinOperator operator_from_document(const OperatorDocument& doc) {
    Poly h = parse_poly_x(doc.target_h, doc.d);
    if (h.nvars() != doc.d) throw std::invalid_argument("document arity does not match the target polynomial");
    TargetSpec target(h);
    if (target.centered_shift != doc.centered_shift)
        throw std::invalid_argument("document centered_shift disagrees with the target polynomial");
    std::vector<Poly> coeffs;
    for (const auto& s : doc.coefficients) coeffs.push_back(parse_poly_y(s));
    Provenance prov = doc.provenance == "solver"    ? Provenance::solver
                      : doc.provenance == "fixture" ? Provenance::fixture
                                                    : Provenance::user;
    SteinOperator op(std::move(target), std::move(coeffs), prov);
    if (op.order() != doc.T) throw std::invalid_argument("document order T disagrees with the coefficients");
    if (op.max_degree() != doc.m) throw std::invalid_argument("document degree m disagrees with the coefficients");
    return op;
}

OperatorDocument document_from_solution(const TargetSpec& target, const ControlSolution& sol,
                                        const std::string& zero_order_mode, Provenance prov) {
    OperatorDocument doc;
    doc.provenance = prov == Provenance::solver ? "solver" : prov == Provenance::fixture ? "fixture" : "user";
    doc.d = target.d;
    doc.target_h = poly_to_string(target.h_raw);
    doc.centered_shift = target.centered_shift;
    doc.zero_order_mode = zero_order_mode;
    doc.T = sol.T;
    int m = 0;
    for (const auto& c : sol.coeffs) {
        auto dg = c.degree();
        if (dg) m = std::max(m, *dg);
    }
    doc.m = m;
    for (const auto& c : sol.coeffs) doc.coefficients.push_back(poly_to_string(c, true));
    doc.nullspace_dimension = sol.nullspace.size();
    for (const auto& dir : sol.nullspace) {
        std::vector<std::string> row;
        for (const auto& q : dir) row.push_back(poly_to_string(q, true));
        doc.basis.push_back(std::move(row));
    }
    return doc;
}

std::string render_symbolic(const std::vector<Poly>& coeffs) {
    std::string out;
    for (size_t t = coeffs.size(); t-- > 0;) {
        const Poly& p = coeffs[t];
        if (p.is_zero()) continue;
        std::string s = poly_to_string(p, true);
        std::string piece = p.term_count() > 1 ? "(" + s + ")" : s;
        if (t == 1) piece += "*D";
        else if (t > 1) piece += "*D^" + std::to_string(t);
        if (out.empty() || piece[0] == '-') out += piece;
        else out += "+" + piece;
    }
    return out.empty() ? "0" : out;
}

std::string render_latex(const std::vector<Poly>& coeffs) {
    std::string out;
    for (size_t t = 0; t < coeffs.size(); ++t) {
        const Poly& p = coeffs[t];
        if (p.is_zero()) continue;
        // factor the sign of the leading (highest-degree) coefficient
        Rational lead = p.dense_coeffs().back();
        bool neg = lead.sign() < 0;
        Poly q = neg ? -p : p;
        std::string inner = poly_to_latex(q);
        std::string piece = q.term_count() > 1 ? "(" + inner + ")" : inner;
        if (t >= 1 && q == Poly::constant(1, Rational(1))) piece.clear();
        if (t == 1) piece += "\\partial";
        else if (t > 1) piece += "\\partial^{" + std::to_string(t) + "}";
        if (out.empty()) out += (neg ? "-" : "") + piece;
        else out += (neg ? " - " : " + ") + piece;
    }
    return out.empty() ? "0" : out;
}

VerificationBlock run_verification(const SteinOperator& op, bool* ok) {
    VerificationBlock v;
    ChainTrace tr = forward_replay(op);
    v.replay_residual_zero = tr.residual_zero();
    v.moment_defects_zero = tr.moments_zero();
    int K = 2 * op.order() + op.max_degree() + 4;
    v.stein_identity_k = K;
    bool identity_ok = true;
    for (const auto& d : stein_identity_check(op, K)) identity_ok = identity_ok && d.is_zero();
    bool moments_eq_ok = true;
    for (const auto& d : moment_conditions(op, op.order() + 4)) moments_eq_ok = moments_eq_ok && d.is_zero();
    v.moment_defects_zero = v.moment_defects_zero && moments_eq_ok;
    if (op.target.d == 1) {
        v.backward_ok = backward_validate(op).ok;
    } else {
        v.backward_ok = true;  // not applicable
    }
    if (ok) *ok = v.replay_residual_zero && v.moment_defects_zero && identity_ok && v.backward_ok;
    return v;
}

}  // namespace stein
