#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include <json.hpp>

#include "polynomial.hpp"

namespace htpq {

namespace detail {

/// Recursive-descent parser for polynomial expressions over variables
/// x0, x1, ... with integer or rational coefficients, e.g.
/// "2*x0^2 + 2*x1^2 - 1" or "1/2*x3 - (x0 - 1)^2".
class PolyParser {
  public:
    explicit PolyParser(const std::string& src) : src_(src) {}

    RationalPolynomial parse() {
        RationalPolynomial p = expression();
        skip_space();
        if (pos_ != src_.size())
            throw parse_error("unexpected trailing input at position " +
                              std::to_string(pos_));
        return p;
    }

  private:
    RationalPolynomial expression() {
        skip_space();
        bool negate = false;
        if (peek() == '+' || peek() == '-') negate = (get() == '-');
        RationalPolynomial acc = term();
        if (negate) acc = -acc;
        while (true) {
            skip_space();
            char c = peek();
            if (c == '+' || c == '-') {
                get();
                RationalPolynomial t = term();
                if (c == '+')
                    acc += t;
                else
                    acc -= t;
            } else {
                return acc;
            }
        }
    }

    RationalPolynomial term() {
        RationalPolynomial acc = power();
        while (true) {
            skip_space();
            char c = peek();
            if (c == '*') {
                get();
                acc *= power();
            } else if (c == '/') {
                get();
                RationalPolynomial d = power();
                if (!d.is_constant() || d.is_zero())
                    throw parse_error(
                        "division requires a nonzero constant divisor");
                Rat inv = Rat(1) / d.constant_term();
                acc = inv * acc;
            } else {
                return acc;
            }
        }
    }

    RationalPolynomial power() {
        RationalPolynomial base = atom();
        skip_space();
        if (peek() == '^') {
            get();
            skip_space();
            unsigned long e = natural();
            return base.pow(e);
        }
        return base;
    }

    RationalPolynomial atom() {
        skip_space();
        char c = peek();
        if (c == '(') {
            get();
            RationalPolynomial inner = expression();
            skip_space();
            if (get() != ')') throw parse_error("missing ')'");
            return inner;
        }
        if (c == 'x' || c == 'X') {
            get();
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw parse_error("variable needs an index, e.g. x0");
            unsigned long idx = natural();
            return RationalPolynomial::variable(idx);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (std::isdigit(static_cast<unsigned char>(peek())))
                digits.push_back(get());
            return RationalPolynomial::constant(Rat(int_from_string(digits)));
        }
        if (c == '\0') throw parse_error("unexpected end of input");
        throw parse_error(std::string("unexpected character '") + c + "'");
    }

    unsigned long natural() {
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw parse_error("expected a number");
        unsigned long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            char d = get();
            if (v > (~0UL - 9) / 10) throw parse_error("number too large");
            v = v * 10 + static_cast<unsigned long>(d - '0');
        }
        return v;
    }

    void skip_space() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char get() { return pos_ < src_.size() ? src_[pos_++] : '\0'; }

    const std::string& src_;
    std::size_t pos_ = 0;
};

template <typename C>
void print_monomial_factors(std::ostringstream& out, const Monomial& m,
                            bool coefficient_printed) {
    bool first = !coefficient_printed;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) out << "*";
        first = false;
        out << "x" << i;
        if (m[i] > 1) out << "^" << m[i];
    }
}

}  // namespace detail

inline RationalPolynomial parse_rational_polynomial(const std::string& text) {
    return detail::PolyParser(text).parse();
}

inline Polynomial parse_polynomial(const std::string& text) {
    return to_integer(parse_rational_polynomial(text));
}

/// Canonical text form: terms in descending graded lexicographic order,
/// explicit '*' between factors, no redundant unit coefficients.
template <typename C>
inline std::string polynomial_to_string(const BasicPolynomial<C>& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        bool negative = c < 0;
        C mag = negative ? C(-c) : c;
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        bool unit = (mag == 1);
        bool coef_printed = !unit || m.empty();
        if (coef_printed) out << mag;
        detail::print_monomial_factors<C>(out, m, coef_printed);
    }
    return out.str();
}

/// Structured form: ascending term list of {"exps": [...], "coef": "..."}.
inline nlohmann::json polynomial_to_json(const Polynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) {
        nlohmann::json exps = nlohmann::json::array();
        for (unsigned long e : m) exps.push_back(e);
        terms.push_back({{"exps", exps}, {"coef", c.get_str()}});
    }
    return terms;
}

inline Polynomial polynomial_from_json(const nlohmann::json& terms) {
    if (!terms.is_array()) throw parse_error("structured polynomial: array expected");
    Polynomial p;
    for (const auto& t : terms) {
        Monomial m;
        for (const auto& e : t.at("exps"))
            m.push_back(e.get<unsigned long>());
        p.add_term(m, int_from_string(t.at("coef").get<std::string>()));
    }
    return p;
}

}  // namespace htpq
