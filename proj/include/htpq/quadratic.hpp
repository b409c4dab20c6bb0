#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polynomial.hpp"
#include "subring.hpp"

namespace htpq {

/// A place of Q: a finite prime or the real place.
struct Place {
    bool infinite = false;
    Int p;

    static Place infinity() { return Place{true, Int(0)}; }
    static Place at(Int prime) {
        if (!is_prime(prime)) throw domain_error("place: not a prime");
        return Place{false, std::move(prime)};
    }

    std::string to_string() const { return infinite ? "inf" : p.get_str(); }
};

struct PadicValuation {
    bool infinite = false;  // v_p(0)
    long value = 0;

    bool operator==(const PadicValuation&) const = default;
};

inline long int_valuation(const Int& n, const Int& p) {
    if (n == 0) throw domain_error("int_valuation: zero");
    Int reduced;
    return static_cast<long>(
        mpz_remove(reduced.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

inline PadicValuation padic_valuation(const Rat& q, const Int& p) {
    if (!is_prime(p)) throw domain_error("padic_valuation: not a prime");
    if (q == 0) return {true, 0};
    long vn = int_valuation(rat_num(q), p);
    long vd = int_valuation(rat_den(q), p);
    return {false, vn - vd};
}

namespace detail {

/// Residue of the p-unit part of q modulo p^k.
inline Int unit_residue(const Rat& q, const Int& p, unsigned long k) {
    long v = padic_valuation(q, p).value;
    Rat unit = q;
    if (v > 0)
        unit /= Rat(pow_int(p, static_cast<unsigned long>(v)));
    else if (v < 0)
        unit *= Rat(pow_int(p, static_cast<unsigned long>(-v)));
    Int m = pow_int(p, k);
    Int num = rat_num(unit) % m;
    if (num < 0) num += m;
    Int dinv;
    if (mpz_invert(dinv.get_mpz_t(), rat_den(unit).get_mpz_t(),
                   m.get_mpz_t()) == 0)
        throw domain_error("unit_residue: non-invertible denominator");
    return (num * dinv) % m;
}

inline int legendre_of_unit(const Rat& q, const Int& p) {
    Int r = unit_residue(q, p, 1);
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

inline int eps_mod4(const Int& u) { return u % 4 == 3 ? 1 : 0; }
inline int omega_mod8(const Int& u) {
    Int r = u % 8;
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace detail

/// Hilbert symbol (a, b)_v: 1 iff z^2 = a x^2 + b y^2 has a nontrivial
/// solution in the completion at v.  Standard case analysis: sign rule at
/// the real place; valuation/Legendre formula at odd p; the mod-8
/// epsilon/omega formula at 2.
inline int hilbert_symbol(const Rat& a, const Rat& b, const Place& v) {
    if (a == 0 || b == 0) throw domain_error("hilbert_symbol: zero input");
    if (v.infinite) return (a < 0 && b < 0) ? -1 : 1;
    const Int& p = v.p;
    long alpha = padic_valuation(a, p).value;
    long beta = padic_valuation(b, p).value;
    if (p == 2) {
        Int u = detail::unit_residue(a, p, 3);
        Int w = detail::unit_residue(b, p, 3);
        int e = detail::eps_mod4(u) * detail::eps_mod4(w);
        if (alpha % 2 != 0) e += detail::omega_mod8(w);
        if (beta % 2 != 0) e += detail::omega_mod8(u);
        return e % 2 == 0 ? 1 : -1;
    }
    int s = 1;
    bool ao = alpha % 2 != 0;
    bool bo = beta % 2 != 0;
    if (ao && bo && (p % 4 == 3)) s = -s;
    if (bo) s *= detail::legendre_of_unit(a, p);
    if (ao) s *= detail::legendre_of_unit(b, p);
    return s;
}

/// Independent evaluator: exhaustive search for a primitive zero of
/// z^2 = a x^2 + b y^2 modulo p^3 (2^6 at p = 2), after normalizing a
/// and b to integers with p-valuation in {0, 1}.  At these moduli a
/// primitive zero lifts p-adically (the variable not divisible by p has
/// a partial derivative of valuation at most 2, and the modulus exceeds
/// twice that), so the outcome equals the Hilbert symbol.
inline int hilbert_symbol_modular(const Rat& a, const Rat& b,
                                  const Place& v) {
    if (a == 0 || b == 0)
        throw domain_error("hilbert_symbol_modular: zero input");
    if (v.infinite) {
        // Over R: solvable nontrivially iff some right-hand coefficient
        // is positive.
        return (a > 0 || b > 0) ? 1 : -1;
    }
    const Int& p = v.p;
    auto normalize = [&](const Rat& q) {
        Int n = rat_num(q) * rat_den(q);
        Int p2 = p * p;
        while (divides(p2, n)) n /= p2;
        return n;
    };
    Int na = normalize(a);
    Int nb = normalize(b);
    unsigned long pu = to_ulong(p);
    unsigned long m = p == 2 ? 64 : pu * pu * pu;
    unsigned long ra = mpz_fdiv_ui(na.get_mpz_t(), m);
    unsigned long rb = mpz_fdiv_ui(nb.get_mpz_t(), m);

    std::vector<bool> squares(m, false);
    for (unsigned long z = 0; z < m; ++z)
        squares[static_cast<unsigned long>((z * z) % m)] = true;
    std::vector<unsigned long> ax(m), by(m);
    for (unsigned long i = 0; i < m; ++i) {
        unsigned long sq = (i * i) % m;
        ax[i] = (ra * sq) % m;
        by[i] = (rb * sq) % m;
    }
    for (unsigned long x = 0; x < m; ++x) {
        bool xdiv = x % pu == 0;
        for (unsigned long y = 0; y < m; ++y) {
            if (xdiv && y % pu == 0) continue;
            unsigned long t = ax[x] + by[y];
            if (t >= m) t -= m;
            if (squares[t]) return 1;
        }
    }
    return -1;
}

inline bool is_square_rational(const Rat& q) {
    if (q == 0) return true;
    return q > 0 && is_perfect_square(rat_num(q)) &&
           is_perfect_square(rat_den(q));
}

inline bool is_square_in_completion(const Rat& q, const Place& v) {
    if (q == 0) throw domain_error("is_square_in_completion: zero");
    if (v.infinite) return q > 0;
    long val = padic_valuation(q, v.p).value;
    if (val % 2 != 0) return false;
    if (v.p == 2) return detail::unit_residue(q, v.p, 3) == 1;
    return detail::legendre_of_unit(q, v.p) == 1;
}

struct PlaceReport {
    std::string place;
    bool ok = false;
    std::string note;
};

struct OracleVerdict {
    bool solvable = false;
    std::string method;
    std::string reason;
    std::vector<PlaceReport> places;
    std::optional<std::map<VarId, Rat>> witness;
};

/// Diagonal quadratic form with nonzero rational entries, dimension <= 4.
struct QuadraticForm {
    std::vector<Rat> diagonal;

    explicit QuadraticForm(std::vector<Rat> diag)
        : diagonal(std::move(diag)) {
        if (diagonal.empty() || diagonal.size() > 4)
            throw domain_error("quadratic form: dimension must be 1..4");
        for (const Rat& d : diagonal)
            if (d == 0)
                throw domain_error("quadratic form: zero diagonal entry");
    }
};

struct Diagonalization {
    std::vector<Rat> diagonal;  // may contain zeros (radical directions)
    bool degenerate = false;
};

/// Symmetric Gaussian congruence diagonalization of a homogeneous
/// quadratic in at most 4 variables.
inline Diagonalization diagonalize(const Polynomial& f) {
    if (f.is_zero()) throw domain_error("diagonalize: zero polynomial");
    if (!f.is_homogeneous() || f.total_degree() != 2)
        throw domain_error("diagonalize: need a homogeneous quadratic");
    std::vector<VarId> vars = f.variables();
    std::size_t n = vars.size();
    if (n > 4) throw domain_error("diagonalize: more than 4 variables");
    std::map<VarId, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[vars[i]] = i;
    std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n, Rat(0)));
    for (const auto& [m, c] : f.terms()) {
        std::vector<std::size_t> present;
        for (std::size_t v = 0; v < m.size(); ++v)
            for (unsigned long e = 0; e < m[v]; ++e)
                present.push_back(pos.at(v));
        if (present.size() != 2)
            throw domain_error("diagonalize: unexpected term");
        std::size_t i = present[0];
        std::size_t j = present[1];
        if (i == j) {
            g[i][i] += Rat(c);
        } else {
            g[i][j] += Rat(c) / 2;
            g[j][i] += Rat(c) / 2;
        }
    }
    auto add_row_col = [&](std::size_t dst, std::size_t src, const Rat& t) {
        for (std::size_t k = 0; k < n; ++k) g[dst][k] += t * g[src][k];
        for (std::size_t k = 0; k < n; ++k) g[k][dst] += t * g[k][src];
    };
    Diagonalization out;
    for (std::size_t i = 0; i < n; ++i) {
        if (g[i][i] == 0) {
            std::size_t with_diag = n;
            std::size_t with_cross = n;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (with_diag == n && g[j][j] != 0) with_diag = j;
                if (with_cross == n && g[i][j] != 0) with_cross = j;
            }
            if (with_cross == n) {
                // Row i is entirely zero from here on: radical direction.
                out.diagonal.push_back(Rat(0));
                out.degenerate = true;
                continue;
            }
            if (with_diag != n) {
                std::swap(g[i], g[with_diag]);
                for (std::size_t k = 0; k < n; ++k)
                    std::swap(g[k][i], g[k][with_diag]);
            } else {
                add_row_col(i, with_cross, Rat(1));
            }
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (g[i][j] == 0) continue;
            Rat t = -g[i][j] / g[i][i];
            add_row_col(j, i, t);
        }
        out.diagonal.push_back(g[i][i]);
    }
    return out;
}

namespace detail {

inline std::set<Int> odd_primes_of(const Rat& q,
                                   unsigned long bound = kDefaultFactorBound) {
    std::set<Int> out;
    for (const auto& pp : factorize(rat_num(q), bound))
        if (pp.prime != 2) out.insert(pp.prime);
    for (const auto& pp : rat_den(q) == 1
                              ? std::vector<PrimePower>{}
                              : factorize(rat_den(q), bound))
        if (pp.prime != 2) out.insert(pp.prime);
    return out;
}

inline std::vector<Place> relevant_places(const std::vector<Rat>& entries) {
    std::vector<Place> places{Place::infinity(), Place::at(Int(2))};
    std::set<Int> odd;
    for (const Rat& e : entries)
        for (const Int& p : odd_primes_of(e)) odd.insert(p);
    for (const Int& p : odd) places.push_back(Place::at(p));
    return places;
}

inline int hasse_invariant(const std::vector<Rat>& diag, const Place& v) {
    int e = 1;
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j)
            e *= hilbert_symbol(diag[i], diag[j], v);
    return e;
}

}  // namespace detail

/// Hasse-Minkowski decision for nontrivial zeros of a diagonal form of
/// dimension <= 4: isotropic over Q iff isotropic at the real place and
/// every p-adic place.  Note the nontrivial-zero semantics; the zero
/// vector is deliberately not a witness here.
inline OracleVerdict isotropic_over_Q(const QuadraticForm& form) {
    OracleVerdict verdict;
    verdict.method = "hasse-minkowski";
    const std::vector<Rat>& d = form.diagonal;

    if (d.size() == 1) {
        verdict.solvable = false;
        verdict.reason = "dimension 1: a*x^2 = 0 forces x = 0";
        return verdict;
    }
    if (d.size() == 2) {
        bool sq = is_square_rational(-d[0] / d[1]);
        verdict.solvable = sq;
        verdict.reason = sq ? "-a/b is a rational square"
                            : "-a/b is not a rational square";
        return verdict;
    }

    std::vector<Place> places = detail::relevant_places(d);
    bool all_ok = true;
    for (const Place& v : places) {
        PlaceReport report;
        report.place = v.to_string();
        if (d.size() == 3) {
            Rat r = -d[0] / d[2];
            Rat s = -d[1] / d[2];
            report.ok = hilbert_symbol(r, s, v) == 1;
            report.note = report.ok ? "local zero exists"
                                    : "hilbert symbol obstruction";
        } else {
            Rat disc(1);
            for (const Rat& e : d) disc *= e;
            bool disc_square = is_square_in_completion(disc, v);
            int hasse = detail::hasse_invariant(d, v);
            int ref = hilbert_symbol(Rat(-1), Rat(-1), v);
            bool anisotropic = disc_square && hasse == -ref;
            report.ok = !anisotropic;
            report.note = report.ok
                              ? "local zero exists"
                              : "square discriminant with opposite Hasse "
                                "invariant";
        }
        if (!report.ok) all_ok = false;
        verdict.places.push_back(report);
    }
    verdict.solvable = all_ok;
    if (all_ok) {
        verdict.reason = "isotropic at every place";
    } else {
        for (const auto& r : verdict.places)
            if (!r.ok) {
                verdict.reason = "anisotropic at place " + r.place;
                break;
            }
    }
    return verdict;
}

/// Exact decomposition of a nonnegative integer as a sum of two squares,
/// by factoring and composing prime representations; empty when some
/// prime congruent to 3 mod 4 has odd exponent.
inline std::optional<std::pair<Int, Int>> two_squares_integer(
    const Int& n, unsigned long factor_bound = kDefaultFactorBound) {
    if (n < 0) throw domain_error("two_squares_integer: negative input");
    if (n == 0) return std::make_pair(Int(0), Int(0));
    Int u(1), v(0);
    auto compose = [&](const Int& c, const Int& d) {
        Int nu = u * c - v * d;
        Int nv = u * d + v * c;
        u = abs_int(nu);
        v = abs_int(nv);
    };
    for (const auto& pp : factorize(n, factor_bound)) {
        if (pp.prime == 2) {
            for (unsigned long i = 0; i < pp.exponent; ++i)
                compose(Int(1), Int(1));
        } else if (pp.prime % 4 == 1) {
            Int a(0), b(0);
            for (Int x = isqrt(pp.prime); x >= 1; --x) {
                Int rest = pp.prime - x * x;
                if (is_perfect_square(rest)) {
                    a = x;
                    b = isqrt(rest);
                    break;
                }
            }
            for (unsigned long i = 0; i < pp.exponent; ++i) compose(a, b);
        } else {
            if (pp.exponent % 2 != 0) return std::nullopt;
            Int scale = pow_int(pp.prime, pp.exponent / 2);
            u *= scale;
            v *= scale;
        }
    }
    if (u * u + v * v != n)
        throw domain_error("two_squares_integer: composition check failed");
    return std::make_pair(u, v);
}

/// Decides whether q is a sum of two squares of elements of R_W, with an
/// explicit witness on yes.  Characterization: q = 0, or q > 0 with
/// even valuation at every prime congruent to 3 mod 4 and all
/// denominator primes inside W.  Necessity: sums of two squares in Q_l
/// have even valuation for l = 3 mod 4 (since -1 is a non-residue), and
/// denominators of ring elements are W-smooth.  Sufficiency: scale by a
/// W-smooth square s^2 to reach a positive integer with the classical
/// two-squares property.
inline OracleVerdict two_squares_in_subring(
    const Rat& q, const SubringDescriptor& w,
    unsigned long factor_bound = kDefaultFactorBound) {
    OracleVerdict verdict;
    verdict.method = "two-squares";
    if (q == 0) {
        verdict.solvable = true;
        verdict.reason = "zero is 0^2 + 0^2";
        verdict.witness = std::map<VarId, Rat>{{0, Rat(0)}, {1, Rat(0)}};
        return verdict;
    }
    if (q < 0) {
        verdict.solvable = false;
        verdict.reason = "negative values are not sums of squares";
        verdict.places.push_back({"inf", false, "negative target"});
        return verdict;
    }
    std::vector<PrimePower> num_f = factorize(rat_num(q), factor_bound);
    std::vector<PrimePower> den_f =
        rat_den(q) == 1 ? std::vector<PrimePower>{}
                        : factorize(rat_den(q), factor_bound);
    for (const auto& pp : num_f) {
        if (pp.prime % 4 == 3 && pp.exponent % 2 != 0) {
            verdict.solvable = false;
            verdict.reason = "odd valuation at " + pp.prime.get_str() +
                             " (congruent to 3 mod 4)";
            verdict.places.push_back(
                {pp.prime.get_str(), false, "odd valuation"});
            return verdict;
        }
    }
    for (const auto& pp : den_f) {
        if (pp.prime % 4 == 3 && pp.exponent % 2 != 0) {
            verdict.solvable = false;
            verdict.reason = "odd valuation at " + pp.prime.get_str() +
                             " (congruent to 3 mod 4)";
            verdict.places.push_back(
                {pp.prime.get_str(), false, "odd valuation"});
            return verdict;
        }
        if (!w.contains_prime(pp.prime)) {
            verdict.solvable = false;
            verdict.reason = "denominator prime " + pp.prime.get_str() +
                             " lies outside the ring";
            verdict.places.push_back(
                {pp.prime.get_str(), false, "denominator outside ring"});
            return verdict;
        }
    }
    Int s(1);
    for (const auto& pp : den_f)
        s *= pow_int(pp.prime, (pp.exponent + 1) / 2);
    Rat scaled = q * Rat(s * s);
    if (rat_den(scaled) != 1)
        throw domain_error("two_squares_in_subring: scaling failed");
    auto pair = two_squares_integer(rat_num(scaled), factor_bound);
    if (!pair)
        throw domain_error("two_squares_in_subring: characterization bug");
    Rat x = make_rational(pair->first, s);
    Rat y = make_rational(pair->second, s);
    if (x * x + y * y != q)
        throw domain_error("two_squares_in_subring: witness check failed");
    verdict.solvable = true;
    verdict.reason = "sum of two squares with ring denominators";
    verdict.witness = std::map<VarId, Rat>{{0, x}, {1, y}};
    return verdict;
}

/// The decidable polynomial family the oracle understands:
///   - c*(X^2 + Y^2) - e with integers c != 0, e: two-squares question
///     for e/c inside R_W;
///   - homogeneous quadratics in <= 4 variables: always solvable (the
///     zero tuple is a root of any homogeneous form, in any ring);
///   - degree-1 single-variable polynomials: direct root inspection.
/// Everything else: no verdict (nullopt = NotInFamily).
inline std::optional<OracleVerdict> decide_family_member(
    const Polynomial& f, const SubringDescriptor& w,
    unsigned long factor_bound = kDefaultFactorBound) {
    if (f.is_zero()) return std::nullopt;

    // c*(X^2 + Y^2) - e pattern.
    {
        std::vector<std::pair<VarId, Int>> square_terms;
        Int constant(0);
        bool shape_ok = true;
        for (const auto& [m, c] : f.terms()) {
            if (m.empty()) {
                constant = c;
                continue;
            }
            VarId var = 0;
            unsigned long nonzero = 0;
            bool squared = false;
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                ++nonzero;
                var = v;
                squared = (m[v] == 2);
            }
            if (nonzero == 1 && squared) {
                square_terms.emplace_back(var, c);
            } else {
                shape_ok = false;
                break;
            }
        }
        if (shape_ok && square_terms.size() == 2 &&
            square_terms[0].second == square_terms[1].second &&
            square_terms[0].first != square_terms[1].first &&
            square_terms[0].second != 0) {
            Int c = square_terms[0].second;
            Int e = -constant;
            OracleVerdict verdict =
                two_squares_in_subring(make_rational(e, c), w, factor_bound);
            if (verdict.witness) {
                std::map<VarId, Rat> mapped{
                    {square_terms[0].first, verdict.witness->at(0)},
                    {square_terms[1].first, verdict.witness->at(1)}};
                verdict.witness = mapped;
            }
            return verdict;
        }
    }

    // Homogeneous quadratic in <= 4 variables.
    if (f.is_homogeneous() && f.total_degree() == 2 &&
        f.variables().size() <= 4) {
        OracleVerdict verdict;
        verdict.method = "trivial-zero";
        verdict.solvable = true;
        verdict.reason =
            "homogeneous form: the zero tuple is a root in every ring";
        std::map<VarId, Rat> zero;
        for (VarId v : f.variables()) zero[v] = Rat(0);
        verdict.witness = zero;
        return verdict;
    }

    // Degree-1 single-variable polynomial: root inspection.
    {
        std::vector<VarId> vars = f.variables();
        if (vars.size() == 1 && f.total_degree() == 1) {
            VarId x = vars[0];
            Monomial lin(x + 1, 0);
            lin[x] = 1;
            Rat root = -Rat(f.constant_term()) / Rat(f.coefficient(lin));
            OracleVerdict verdict;
            verdict.method = "linear-root";
            if (w.contains_rational(root, factor_bound)) {
                verdict.solvable = true;
                verdict.reason = "unique root lies in the ring";
                verdict.witness = std::map<VarId, Rat>{{x, root}};
            } else {
                verdict.solvable = false;
                verdict.reason =
                    "unique root has a denominator prime outside the ring";
                for (const Int& p : denominator_primes(root, factor_bound))
                    if (!w.contains_prime(p))
                        verdict.places.push_back(
                            {p.get_str(), false, "denominator outside ring"});
            }
            return verdict;
        }
    }

    return std::nullopt;
}

}  // namespace htpq
