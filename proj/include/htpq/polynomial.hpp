#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "integers.hpp"

namespace htpq {

using VarId = std::size_t;

/// Exponent vector indexed by variable id, stored without trailing zeros
/// so that each monomial has exactly one representation.
using Monomial = std::vector<unsigned long>;

inline Monomial trim_monomial(Monomial m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
    return m;
}

inline unsigned long monomial_degree(const Monomial& m) {
    unsigned long d = 0;
    for (unsigned long e : m) d += e;
    return d;
}

/// Graded lexicographic order: lower total degree first, ties broken by
/// lexicographic comparison on exponent vectors (absent entries read 0).
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned long da = monomial_degree(a);
        unsigned long db = monomial_degree(b);
        if (da != db) return da < db;
        std::size_t n = std::max(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            unsigned long ea = i < a.size() ? a[i] : 0;
            unsigned long eb = i < b.size() ? b[i] : 0;
            if (ea != eb) return ea < eb;
        }
        return false;
    }
};

/// Sparse multivariate polynomial with exact coefficients.  The term map
/// never stores zero coefficients or untrimmed monomials, so equal
/// polynomials have equal representations.
template <typename C>
class BasicPolynomial {
  public:
    using coefficient_type = C;
    using TermMap = std::map<Monomial, C, GrlexLess>;

    BasicPolynomial() = default;

    /// Constant polynomial.
    explicit BasicPolynomial(const C& c) { add_term({}, c); }

    static BasicPolynomial variable(VarId v) {
        BasicPolynomial p;
        Monomial m(v + 1, 0);
        m[v] = 1;
        p.add_term(m, C(1));
        return p;
    }

    static BasicPolynomial constant(const C& c) { return BasicPolynomial(c); }

    void add_term(const Monomial& mono, const C& coef) {
        if (coef == 0) return;
        Monomial m = trim_monomial(mono);
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), coef);
        } else {
            it->second += coef;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    C constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? C(0) : it->second;
    }

    C coefficient(const Monomial& mono) const {
        auto it = terms_.find(trim_monomial(mono));
        return it == terms_.end() ? C(0) : it->second;
    }

    /// Total degree; undefined for the zero polynomial.
    unsigned long total_degree() const {
        if (terms_.empty())
            throw domain_error("total_degree: zero polynomial");
        return monomial_degree(terms_.rbegin()->first);
    }

    unsigned long degree_in(VarId v) const {
        unsigned long d = 0;
        for (const auto& [m, c] : terms_)
            if (v < m.size()) d = std::max(d, m[v]);
        return d;
    }

    /// Ids of variables that actually occur.
    std::vector<VarId> variables() const {
        std::set<VarId> vs;
        for (const auto& [m, c] : terms_)
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] != 0) vs.insert(i);
        return {vs.begin(), vs.end()};
    }

    /// One past the largest occurring variable id; 0 if none occur.
    VarId variable_span() const {
        VarId span = 0;
        for (const auto& [m, c] : terms_)
            span = std::max<VarId>(span, m.size());
        return span;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        unsigned long d = monomial_degree(terms_.begin()->first);
        for (const auto& [m, c] : terms_)
            if (monomial_degree(m) != d) return false;
        return true;
    }

    BasicPolynomial operator-() const {
        BasicPolynomial r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    BasicPolynomial& operator+=(const BasicPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    BasicPolynomial& operator-=(const BasicPolynomial& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend BasicPolynomial operator+(BasicPolynomial a,
                                     const BasicPolynomial& b) {
        a += b;
        return a;
    }

    friend BasicPolynomial operator-(BasicPolynomial a,
                                     const BasicPolynomial& b) {
        a -= b;
        return a;
    }

    friend BasicPolynomial operator*(const BasicPolynomial& a,
                                     const BasicPolynomial& b) {
        BasicPolynomial r;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(std::max(ma.size(), mb.size()), 0);
                for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
                for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    BasicPolynomial& operator*=(const BasicPolynomial& o) {
        *this = *this * o;
        return *this;
    }

    friend BasicPolynomial operator*(const C& s, const BasicPolynomial& p) {
        BasicPolynomial r;
        if (s == 0) return r;
        for (const auto& [m, c] : p.terms_) r.terms_.emplace(m, s * c);
        return r;
    }

    BasicPolynomial pow(unsigned long e) const {
        BasicPolynomial r(C(1));
        BasicPolynomial base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const BasicPolynomial& o) const {
        return terms_ == o.terms_;
    }
    bool operator!=(const BasicPolynomial& o) const { return !(*this == o); }

    /// Exact evaluation: `point[i]` is the value of variable i and must
    /// cover every occurring variable.
    Rat evaluate(const std::vector<Rat>& point) const {
        Rat acc(0);
        for (const auto& [m, c] : terms_) {
            Rat term = to_rat(c);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (i >= point.size())
                    throw domain_error("evaluate: missing variable value");
                term *= pow_rat(point[i], m[i]);
            }
            acc += term;
        }
        return acc;
    }

    /// Substitute one variable by a rational value, keeping the others.
    BasicPolynomial<Rat> substitute(VarId v, const Rat& value) const {
        BasicPolynomial<Rat> r;
        for (const auto& [m, c] : terms_) {
            Rat coef = to_rat(c);
            Monomial rest = m;
            if (v < rest.size() && rest[v] != 0) {
                coef *= pow_rat(value, rest[v]);
                rest[v] = 0;
            }
            r.add_term(rest, coef);
        }
        return r;
    }

    /// Substitute a polynomial for one variable.
    BasicPolynomial substitute(VarId v, const BasicPolynomial& value) const {
        BasicPolynomial r;
        for (const auto& [m, c] : terms_) {
            Monomial rest = m;
            unsigned long e = 0;
            if (v < rest.size()) {
                e = rest[v];
                rest[v] = 0;
            }
            BasicPolynomial t;
            t.add_term(rest, c);
            if (e > 0) t *= value.pow(e);
            r += t;
        }
        return r;
    }

    /// Rename variables; `mapping[old]` is the new id.  Ids not in the
    /// mapping keep their value.  The mapping must be injective on the
    /// occurring variables.
    BasicPolynomial rename(const std::map<VarId, VarId>& mapping) const {
        BasicPolynomial r;
        for (const auto& [m, c] : terms_) {
            Monomial nm;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                VarId tgt = i;
                auto it = mapping.find(i);
                if (it != mapping.end()) tgt = it->second;
                if (nm.size() <= tgt) nm.resize(tgt + 1, 0);
                if (nm[tgt] != 0)
                    throw domain_error("rename: mapping not injective");
                nm[tgt] = m[i];
            }
            r.add_term(nm, c);
        }
        if (r.term_count() != term_count())
            throw domain_error("rename: mapping not injective");
        return r;
    }

  private:
    static Rat to_rat(const Int& v) { return Rat(v); }
    static const Rat& to_rat(const Rat& v) { return v; }

    TermMap terms_;
};

using Polynomial = BasicPolynomial<Int>;
using RationalPolynomial = BasicPolynomial<Rat>;

inline RationalPolynomial to_rational(const Polynomial& p) {
    RationalPolynomial r;
    for (const auto& [m, c] : p.terms()) r.add_term(m, Rat(c));
    return r;
}

/// Checked conversion; throws if any coefficient is non-integral.
inline Polynomial to_integer(const RationalPolynomial& p) {
    Polynomial r;
    for (const auto& [m, c] : p.terms()) {
        if (rat_den(c) != 1)
            throw domain_error("to_integer: non-integral coefficient");
        r.add_term(m, rat_num(c));
    }
    return r;
}

/// Multiply by the lcm of coefficient denominators, giving an integer
/// polynomial with the same rational zero set.
inline Polynomial clear_denominators(const RationalPolynomial& p) {
    Int l(1);
    for (const auto& [m, c] : p.terms()) l = lcm_int(l, rat_den(c));
    Polynomial r;
    for (const auto& [m, c] : p.terms()) {
        Rat scaled = c * Rat(l);
        r.add_term(m, rat_num(scaled));
    }
    return r;
}

/// Classical homogenization: multiply each term of f by y^(d - deg(term))
/// where d = total_degree(f).  The id y must not occur in f.
template <typename C>
inline BasicPolynomial<C> homogenize_core(const BasicPolynomial<C>& f,
                                          VarId y) {
    if (f.is_zero()) throw domain_error("homogenize_core: zero polynomial");
    for (VarId v : f.variables())
        if (v == y)
            throw domain_error("homogenize_core: variable already occurs");
    unsigned long d = f.total_degree();
    BasicPolynomial<C> r;
    for (const auto& [m, c] : f.terms()) {
        Monomial nm = m;
        unsigned long gap = d - monomial_degree(m);
        if (gap > 0) {
            if (nm.size() <= y) nm.resize(y + 1, 0);
            nm[y] += gap;
        }
        r.add_term(nm, c);
    }
    return r;
}

}  // namespace htpq
