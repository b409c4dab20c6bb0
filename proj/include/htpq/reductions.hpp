#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polynomial.hpp"
#include "primes.hpp"

namespace htpq {

/// Greedy four-square decomposition a >= b >= c >= d with backtracking;
/// total by Lagrange's theorem.
inline std::array<Int, 4> four_squares(const Int& n) {
    if (n < 0) throw domain_error("four_squares: negative input");
    std::array<Int, 4> out{Int(0), Int(0), Int(0), Int(0)};
    std::array<Int, 4> pick{Int(0), Int(0), Int(0), Int(0)};
    auto rec = [&](auto&& self, const Int& rem, int slot,
                   const Int& cap) -> bool {
        if (slot == 4) return rem == 0;
        Int hi = isqrt(rem);
        if (hi > cap) hi = cap;
        for (Int a = hi; a >= 0; --a) {
            // The remaining slots can contribute at most (4 - slot - 1)
            // squares of size a^2 each.
            Int rest = rem - a * a;
            if (rest > Int(3 - slot) * a * a) break;
            pick[slot] = a;
            if (self(self, rest, slot + 1, a)) return true;
        }
        return false;
    };
    if (!rec(rec, n, 0, n + 1))
        throw domain_error("four_squares: internal exhaustion");
    out = pick;
    return out;
}

/// The homogenization-with-positivity reduction.  For f in variables
/// X_0..X_{n-1} of total degree d:
///
///   F = (Y^d f(X/Y))^2 + (Y - 1 - A^2 - B^2 - C^2 - D^2)^2
///
/// so that for every subring R of Q, f has a rational zero iff F has a
/// zero in R; both witness directions are explicit.  Completeness of the
/// forward map: scale a rational zero by an integer common denominator
/// Y >= 1 and decompose Y - 1 into four squares.  Soundness of the
/// backward map: F = 0 forces both squares to vanish, Y = 1 + sum of
/// squares >= 1 > 0, and x_i = X_i / Y is a zero of f.
struct HomogenizationResult {
    Polynomial reduced;
    std::vector<VarId> original_vars;
    VarId y = 0, a = 0, b = 0, c = 0, d = 0;

    std::map<VarId, Int> forward_witness(
        const std::map<VarId, Rat>& zero) const {
        Int y0(1);
        for (VarId v : original_vars) {
            auto it = zero.find(v);
            if (it == zero.end())
                throw domain_error("forward_witness: missing coordinate");
            y0 = lcm_int(y0, rat_den(it->second));
        }
        std::map<VarId, Int> out;
        for (VarId v : original_vars) {
            Rat scaled = zero.at(v) * Rat(y0);
            out[v] = rat_num(scaled);
        }
        out[y] = y0;
        std::array<Int, 4> sq = four_squares(y0 - 1);
        out[a] = sq[0];
        out[b] = sq[1];
        out[c] = sq[2];
        out[d] = sq[3];
        return out;
    }

    std::map<VarId, Rat> backward_witness(
        const std::map<VarId, Rat>& zero) const {
        Rat yv = zero.at(y);
        if (yv == 0)
            throw domain_error("backward_witness: Y must be nonzero");
        std::map<VarId, Rat> out;
        for (VarId v : original_vars) out[v] = zero.at(v) / yv;
        return out;
    }
};

inline HomogenizationResult homogenize_with_positivity(const Polynomial& f) {
    if (f.is_zero())
        throw domain_error("homogenize_with_positivity: zero polynomial");
    HomogenizationResult r;
    r.original_vars = f.variables();
    VarId base = f.variable_span();
    r.y = base;
    r.a = base + 1;
    r.b = base + 2;
    r.c = base + 3;
    r.d = base + 4;
    Polynomial core = homogenize_core(f, r.y);
    Polynomial positivity =
        Polynomial::variable(r.y) - Polynomial(Int(1)) -
        Polynomial::variable(r.a) * Polynomial::variable(r.a) -
        Polynomial::variable(r.b) * Polynomial::variable(r.b) -
        Polynomial::variable(r.c) * Polynomial::variable(r.c) -
        Polynomial::variable(r.d) * Polynomial::variable(r.d);
    r.reduced = core * core + positivity * positivity;
    return r;
}

/// Sum of squares: zero exactly at the common zeros of the inputs, over
/// any subring of Q.
inline Polynomial conjoin(const std::vector<Polynomial>& gs) {
    if (gs.empty()) throw domain_error("conjoin: empty list");
    Polynomial sum;
    for (const Polynomial& g : gs) sum += g * g;
    return sum;
}

/// A per-prime gadget: a polynomial in the four designated variables
/// x0..x3 whose declared semantics is the predicate v_p(x0) >= 0.  The
/// semantic claim is metadata; at desk scale it is checked only against
/// the valuation oracle, never trusted as a polynomial identity.
struct GadgetEntry {
    Int prime;
    Polynomial gadget;
    std::string semantics;

    bool is_mock() const { return semantics == "mock"; }
};

inline constexpr const char* kMockSemanticsTag = "mock";

/// Placeholder gadget polynomial for mock entries; mentions exactly the
/// four designated variables as the shape contract requires.
inline Polynomial mock_gadget_polynomial() {
    return Polynomial::variable(0) + Polynomial::variable(1) +
           Polynomial::variable(2) + Polynomial::variable(3);
}

class GadgetRegistry {
  public:
    void add(GadgetEntry entry) {
        if (!is_prime(entry.prime))
            throw domain_error("gadget registry: key must be prime");
        std::vector<VarId> vars = entry.gadget.variables();
        if (vars != std::vector<VarId>{0, 1, 2, 3})
            throw domain_error(
                "gadget must mention exactly the variables x0..x3");
        if (entries_.count(entry.prime))
            throw domain_error("duplicate gadget for prime " +
                               entry.prime.get_str());
        entries_.emplace(entry.prime, std::move(entry));
    }

    const GadgetEntry* find(const Int& p) const {
        auto it = entries_.find(p);
        return it == entries_.end() ? nullptr : &it->second;
    }

    bool has_mock() const {
        for (const auto& [p, e] : entries_)
            if (e.is_mock()) return true;
        return false;
    }

    std::size_t size() const { return entries_.size(); }

    static GadgetRegistry with_mocks(const std::set<Int>& primes) {
        GadgetRegistry reg;
        for (const Int& p : primes)
            reg.add({p, mock_gadget_polynomial(), kMockSemanticsTag});
        return reg;
    }

  private:
    std::map<Int, GadgetEntry> entries_;
};

/// One gadget instance inside a semilocal reduction: the prime, the
/// constrained variable of g, and the three fresh auxiliaries.
struct GadgetInstance {
    Int prime;
    VarId variable;
    std::array<VarId, 3> fresh;
};

struct SemilocalResult {
    Polynomial reduced;
    std::vector<GadgetInstance> instances;
    bool uses_mock = false;
};

/// The semilocal combiner: (g)^2 + sum over p in A0 and every variable
/// id j <= n of (g_p(Z_j, fresh triple))^2, where n is the largest
/// variable id of g.  Fresh variables are appended after Z_n in
/// (p ascending, j ascending, k in {1,2,3}) order, so the output is
/// deterministic.  The semantic guarantee (output solvable over Q iff g
/// solvable in R_{P - A0}) holds exactly when every registered gadget
/// satisfies its declared semantics.
inline SemilocalResult semilocal_reduce(const Polynomial& g,
                                        const std::set<Int>& a0,
                                        const GadgetRegistry& registry) {
    if (g.is_zero()) throw domain_error("semilocal_reduce: zero polynomial");
    SemilocalResult result;
    result.reduced = g * g;
    VarId span = g.variable_span();
    VarId next = span;
    for (const Int& p : a0) {
        const GadgetEntry* entry = registry.find(p);
        if (entry == nullptr)
            throw domain_error("semilocal_reduce: no gadget for prime " +
                               p.get_str());
        if (entry->is_mock()) result.uses_mock = true;
        for (VarId j = 0; j < span; ++j) {
            GadgetInstance inst{p, j, {next, next + 1, next + 2}};
            next += 3;
            std::map<VarId, VarId> renaming{{0, inst.variable},
                                            {1, inst.fresh[0]},
                                            {2, inst.fresh[1]},
                                            {3, inst.fresh[2]}};
            Polynomial instance = entry->gadget.rename(renaming);
            result.reduced += instance * instance;
            result.instances.push_back(inst);
        }
    }
    return result;
}

/// The declared semantics of a mock gadget for p at a value.
inline bool mock_gadget_admits(const Rat& value, const Int& p) {
    if (!is_prime(p)) throw domain_error("mock_gadget_admits: not a prime");
    return !divides(p, rat_den(value));
}

/// Semantic evaluation of a fully mock semilocal reduction: every gadget
/// instance enforces v_p(Z_j) >= 0, so the combined output is solvable
/// over Q precisely when g has a zero whose coordinates avoid all primes
/// of A0 in their denominators.  Test-only: real gadgets would make the
/// output an honest polynomial question instead.
inline bool mock_semantics_admits(const std::map<VarId, Rat>& assignment,
                                  const std::set<Int>& a0) {
    for (const auto& [v, q] : assignment)
        for (const Int& p : a0)
            if (!mock_gadget_admits(q, p)) return false;
    return true;
}

}  // namespace htpq
