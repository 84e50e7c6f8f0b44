#include "stein/poly_text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace stein {

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    bool y_mode;
    int max_var = 0;

    explicit Parser(const std::string& text, bool y) : s(text), y_mode(y) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }

    std::string integer_literal() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        if (pos < s.size() && s[pos] == '.') fail("floating-point literals are not accepted");
        return s.substr(start, pos - start);
    }

    unsigned exponent() {
        std::string digits = integer_literal();
        if (digits.size() > 4) fail("exponent too large");
        return static_cast<unsigned>(std::stoul(digits));
    }

    // number := int ['/' int]
    Rational number() {
        std::string num = integer_literal();
        skip_ws();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            std::string den = integer_literal();
            return Rational(num + "/" + den);
        }
        return Rational(num);
    }

    // term entry: variable name, returns 0-based index
    int variable() {
        skip_ws();
        if (pos >= s.size()) fail("expected variable");
        char c = s[pos];
        if (y_mode) {
            if (c != 'y') fail("expected variable y");
            ++pos;
            return 0;
        }
        if (c != 'x') fail("expected variable x");
        ++pos;
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        int idx = 1;
        if (pos > start) idx = std::stoi(s.substr(start, pos - start));
        if (idx < 1 || idx > 64) fail("variable index out of range");
        max_var = std::max(max_var, idx);
        return idx - 1;
    }

    // factor := number | variable ['^' uint] | '(' expr ')'
    // A factor is returned as (coefficient, exponent map).
    struct Piece {
        Rational c = Rational(1);
        std::map<int, unsigned> vars;
        bool is_poly = false;
        Poly poly{1};
    };

    Piece factor() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        Piece out;
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Poly inner = expr();
            if (!accept(')')) fail("expected ')'");
            if (accept('^')) {
                unsigned e = exponent();
                inner = inner.pow(e);
            }
            out.is_poly = true;
            out.poly = std::move(inner);
            return out;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            out.c = number();
            if (accept('^')) {
                unsigned e = exponent();
                Rational base = out.c;
                out.c = Rational(1);
                for (unsigned i = 0; i < e; ++i) out.c *= base;
            }
            return out;
        }
        int v = variable();
        unsigned e = 1;
        if (accept('^')) e = exponent();
        out.vars[v] += e;
        return out;
    }

    // term := factor ('*' factor)*
    Poly term() {
        Rational coeff(1);
        std::map<int, unsigned> vars;
        std::vector<Poly> poly_factors;
        while (true) {
            Piece p = factor();
            if (p.is_poly) {
                poly_factors.push_back(std::move(p.poly));
            } else {
                coeff *= p.c;
                for (auto& [v, e] : p.vars) vars[v] += e;
            }
            if (!accept('*')) break;
        }
        // assembled after the whole expression is read, once arity is known
        Poly placeholder(0);
        pending.push_back({std::move(coeff), std::move(vars), std::move(poly_factors)});
        return placeholder;
    }

    struct PendingTerm {
        Rational coeff;
        std::map<int, unsigned> vars;
        std::vector<Poly> poly_factors;
        int sign = 1;
    };
    std::vector<PendingTerm> pending;

    // expr := ['+'|'-'] term (('+'|'-') term)*
    Poly expr() {
        std::vector<PendingTerm> saved = std::move(pending);
        pending.clear();
        int sign = 1;
        skip_ws();
        if (accept('-')) sign = -1;
        else accept('+');
        term();
        pending.back().sign = sign;
        while (true) {
            skip_ws();
            if (accept('+')) sign = 1;
            else if (accept('-')) sign = -1;
            else break;
            term();
            pending.back().sign = sign;
        }
        std::vector<PendingTerm> mine = std::move(pending);
        pending = std::move(saved);
        return assemble(mine);
    }

    Poly assemble(std::vector<PendingTerm>& ts) {
        int nv = y_mode ? 1 : std::max(max_var, 1);
        Poly out(nv);
        for (auto& t : ts) {
            Poly mono(nv);
            MultiIndex m = MultiIndex::zeros(nv);
            for (auto& [v, e] : t.vars) m.e[static_cast<size_t>(v)] += e;
            mono.add_term(std::move(m), t.coeff * Rational(t.sign));
            for (auto& pf : t.poly_factors) mono = mono * widen(pf, nv);
            out += mono;
        }
        return out;
    }

    static Poly widen(const Poly& p, int nv) {
        if (p.nvars() == nv) return p;
        Poly out(nv);
        for (const auto& [m, c] : p.terms()) {
            MultiIndex w = MultiIndex::zeros(nv);
            for (size_t k = 0; k < m.size(); ++k) w.e[k] = m.e[k];
            out.add_term(std::move(w), c);
        }
        return out;
    }

    Poly run() {
        Poly p = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return p;
    }
};

std::string var_name(int k, int nvars, bool y_variable) {
    if (y_variable) return "y";
    if (nvars == 1) return "x";
    return "x" + std::to_string(k + 1);
}

std::string monomial_str(const MultiIndex& m, int nvars, bool y_variable) {
    std::string out;
    for (size_t k = 0; k < m.size(); ++k) {
        if (m.e[k] == 0) continue;
        if (!out.empty()) out += "*";
        out += var_name(static_cast<int>(k), nvars, y_variable);
        if (m.e[k] > 1) out += "^" + std::to_string(m.e[k]);
    }
    return out;
}

// descending total degree, then descending exponent order
std::vector<std::pair<MultiIndex, Rational>> sorted_terms(const Poly& p) {
    std::vector<std::pair<MultiIndex, Rational>> ts(p.terms().begin(), p.terms().end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        unsigned ta = a.first.total(), tb = b.first.total();
        if (ta != tb) return ta > tb;
        return b.first < a.first;
    });
    return ts;
}

}  // namespace

Poly parse_poly_x(const std::string& text, int min_vars) {
    Parser p(text, false);
    p.max_var = std::max(min_vars, 1);
    // two-phase: a first pass discovers the arity while collecting terms
    return p.run();
}

Poly parse_poly_y(const std::string& text) {
    Parser p(text, true);
    return p.run();
}

std::string poly_to_string(const Poly& p, bool y_variable) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : sorted_terms(p)) {
        std::string mono = monomial_str(m, p.nvars(), y_variable);
        std::string piece;
        if (mono.empty()) {
            piece = c.str();
        } else if (c == Rational(1)) {
            piece = mono;
        } else if (c == Rational(-1)) {
            piece = "-" + mono;
        } else {
            piece = c.str() + "*" + mono;
        }
        if (out.empty() || piece[0] == '-') out += piece;
        else out += "+" + piece;
    }
    return out;
}

std::string poly_to_latex(const Poly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : sorted_terms(p)) {
        Rational a = c.abs();
        std::string piece;
        unsigned e = m.total();
        if (e == 0) {
            piece = a.str();
        } else {
            std::string vp = e == 1 ? var : (e < 10 ? var + "^" + std::to_string(e) : var + "^{" + std::to_string(e) + "}");
            piece = (a == Rational(1)) ? vp : a.str() + "\\," + vp;
        }
        if (first) {
            out += (c.sign() < 0 ? "-" : "") + piece;
            first = false;
        } else {
            out += (c.sign() < 0 ? " - " : " + ") + piece;
        }
    }
    return out;
}

}  // namespace stein
