#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quadratic.hpp"
#include "solver.hpp"

namespace htpq {

/// A cylinder certificate for one polynomial f: either U_sigma is inside
/// the solvability class A(f) (a verified witness whose denominator
/// support is covered by the ones of sigma), or U_sigma lies in the
/// interior of the complement (the oracle certifies insolvability in
/// R_{P - zeros(sigma)}, which only shrinks under extension).
struct CylinderCertificate {
    enum class Kind { Positive, Negative };
    Kind kind = Kind::Positive;
    Polynomial target;
    Condition sigma;
    std::optional<SolutionWitness> witness;  // Positive
    std::optional<OracleVerdict> reason;     // Negative
};

/// Re-derivation of a certificate from scratch; nothing is trusted from
/// the stored fields except the claim itself.
inline bool validate_certificate(const CylinderCertificate& cert,
                                 unsigned long factor_bound =
                                     kDefaultFactorBound) {
    if (cert.kind == CylinderCertificate::Kind::Positive) {
        if (!cert.witness) return false;
        std::vector<Rat> point(cert.target.variable_span(), Rat(0));
        for (const auto& [v, q] : cert.witness->assignment) {
            if (v >= point.size()) return false;
            point[v] = q;
        }
        for (VarId v : cert.target.variables())
            if (!cert.witness->assignment.count(v)) return false;
        if (cert.target.evaluate(point) != 0) return false;
        std::set<Int> ones;
        for (const Int& p : cert.sigma.one_primes()) ones.insert(p);
        for (const auto& [v, q] : cert.witness->assignment)
            for (const Int& p : denominator_primes(q, factor_bound))
                if (!ones.count(p)) return false;
        return true;
    }
    std::set<Int> zeros;
    for (const Int& p : cert.sigma.zero_primes()) zeros.insert(p);
    auto verdict = decide_family_member(
        cert.target, SubringDescriptor::cofinite_exclude(zeros),
        factor_bound);
    return verdict.has_value() && !verdict->solvable;
}

namespace detail {

/// Visits conditions of length <= max_len in canonical order (length
/// ascending, then lexicographic with 0 < 1), skipping every extension
/// of a condition the `certified` callback accepted: what remains
/// accepted is exactly the minimal certified antichain.
template <typename Certified>
void minimal_conditions(std::size_t max_len, Certified&& certified) {
    std::set<std::string> emitted;
    std::vector<Condition> level{Condition{}};
    for (std::size_t len = 0;; ++len) {
        for (const Condition& sigma : level) {
            bool covered = false;
            for (std::size_t l = 0; l < sigma.length() && !covered; ++l)
                if (emitted.count(sigma.prefix(l).to_string()))
                    covered = true;
            if (covered) continue;
            if (certified(sigma)) emitted.insert(sigma.to_string());
        }
        if (len == max_len) break;
        std::vector<Condition> next;
        next.reserve(level.size() * 2);
        for (const Condition& sigma : level) {
            next.push_back(sigma.extended(false));
            next.push_back(sigma.extended(true));
        }
        level = std::move(next);
    }
}

}  // namespace detail

/// All minimal sigma of length <= L whose ones-only subring admits a
/// solver witness at height <= H.  Monotone in extension, so the minimal
/// ones form a prefix antichain; listed in canonical condition order.
inline std::vector<CylinderCertificate> positive_certificates(
    const Polynomial& f, std::size_t L, unsigned long H,
    const SearchLimits& limits = {}) {
    if (f.is_zero())
        throw domain_error("positive_certificates: zero polynomial");
    std::vector<CylinderCertificate> out;
    std::map<std::string, SearchOutcome> memo;
    detail::minimal_conditions(L, [&](const Condition& sigma) {
        std::set<Int> ones;
        for (const Int& p : sigma.one_primes()) ones.insert(p);
        std::string key;
        for (const Int& p : ones) key += p.get_str() + ",";
        auto it = memo.find(key);
        if (it == memo.end()) {
            SearchOutcome got = search(
                f, SubringDescriptor::finite_include(ones), H, limits);
            it = memo.emplace(key, std::move(got)).first;
        }
        if (!it->second.found()) return false;
        CylinderCertificate cert;
        cert.kind = CylinderCertificate::Kind::Positive;
        cert.target = f;
        cert.sigma = sigma;
        cert.witness = it->second.witness;
        out.push_back(std::move(cert));
        return true;
    });
    return out;
}

/// All minimal sigma of length <= L where the oracle certifies
/// insolvability in R_{P - zeros(sigma)}; nullopt when f is outside the
/// oracle family (Inconclusive).
inline std::optional<std::vector<CylinderCertificate>>
negative_certificates(const Polynomial& f, std::size_t L,
                      unsigned long factor_bound = kDefaultFactorBound) {
    if (!decide_family_member(f, SubringDescriptor::rationals(),
                              factor_bound)
             .has_value())
        return std::nullopt;
    std::vector<CylinderCertificate> out;
    std::map<std::string, OracleVerdict> memo;
    detail::minimal_conditions(L, [&](const Condition& sigma) {
        std::set<Int> zeros;
        for (const Int& p : sigma.zero_primes()) zeros.insert(p);
        std::string key;
        for (const Int& p : zeros) key += p.get_str() + ",";
        auto it = memo.find(key);
        if (it == memo.end()) {
            auto verdict = decide_family_member(
                f, SubringDescriptor::cofinite_exclude(zeros),
                factor_bound);
            it = memo.emplace(key, std::move(*verdict)).first;
        }
        if (it->second.solvable) return false;
        CylinderCertificate cert;
        cert.kind = CylinderCertificate::Kind::Negative;
        cert.target = f;
        cert.sigma = sigma;
        cert.reason = it->second;
        out.push_back(std::move(cert));
        return true;
    });
    return out;
}

/// The three-way state of one W against one f at finite budget.
struct ProbeStatus {
    enum class Kind { InA, InComplementInterior, UndecidedUpTo };
    Kind kind = Kind::UndecidedUpTo;
    std::optional<SolutionWitness> witness;     // InA
    std::set<Int> exclusion;                    // InComplementInterior
    std::optional<OracleVerdict> reason;        // InComplementInterior
    unsigned long depth = 0;
    unsigned long height = 0;
};

namespace detail {

/// Subsets of `base` in canonical query order: size ascending, then
/// lexicographic on the sorted element tuples.
inline std::vector<std::set<Int>> subsets_in_order(
    const std::vector<Int>& base) {
    std::vector<std::vector<Int>> all;
    std::size_t n = base.size();
    if (n > 20) throw resource_limit_error("subset enumeration too large");
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<Int> sel;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t(1) << i)) sel.push_back(base[i]);
        all.push_back(std::move(sel));
    }
    std::sort(all.begin(), all.end(),
              [](const std::vector<Int>& a, const std::vector<Int>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    std::vector<std::set<Int>> out;
    out.reserve(all.size());
    for (auto& v : all) out.emplace_back(v.begin(), v.end());
    return out;
}

/// First `want` primes outside W, scanning prime indices up to scan_cap;
/// cofinite rings simply yield fewer.
inline std::vector<Int> complement_primes(const SubringDescriptor& w,
                                          std::size_t want,
                                          std::size_t scan_cap) {
    std::vector<Int> out;
    for (std::size_t i = 0; i < scan_cap && out.size() < want; ++i)
        if (!w.contains_prime_index(i)) out.push_back(nth_prime(i));
    return out;
}

/// Smallest oracle-certified exclusion set drawn from `pool`, if any.
inline std::optional<std::pair<std::set<Int>, OracleVerdict>>
certified_exclusion(const Polynomial& f, const std::vector<Int>& pool,
                    unsigned long factor_bound) {
    for (const std::set<Int>& a0 : subsets_in_order(pool)) {
        auto verdict = decide_family_member(
            f, SubringDescriptor::cofinite_exclude(a0), factor_bound);
        if (!verdict.has_value()) return std::nullopt;  // outside family
        if (!verdict->solvable)
            return std::make_pair(a0, std::move(*verdict));
    }
    return std::nullopt;
}

}  // namespace detail

/// One finite-budget look at the trichotomy: a witness in R_W, an
/// oracle-certified exclusion set inside the complement of W, or
/// honestly undecided at this (depth, H).
inline ProbeStatus boundary_probe(const Polynomial& f,
                                  const SubringDescriptor& w,
                                  std::size_t depth, unsigned long H,
                                  const SearchLimits& limits = {}) {
    if (f.is_zero()) throw domain_error("boundary_probe: zero polynomial");
    ProbeStatus status;
    status.depth = depth;
    status.height = H;
    SearchOutcome out = search(f, w, H, limits);
    if (out.found()) {
        status.kind = ProbeStatus::Kind::InA;
        status.witness = out.witness;
        return status;
    }
    std::vector<Int> pool;
    for (std::size_t i = 0; i < depth; ++i)
        if (!w.contains_prime_index(i)) pool.push_back(nth_prime(i));
    auto certified =
        detail::certified_exclusion(f, pool, limits.factor_bound);
    if (certified) {
        status.kind = ProbeStatus::Kind::InComplementInterior;
        status.exclusion = certified->first;
        status.reason = certified->second;
    }
    return status;
}

struct PhiBudget {
    unsigned rounds = 8;
    std::size_t complement_scan = 64;
    SearchLimits limits;
};

struct PhiResult {
    enum class Kind { Member, NonMember, Undecided };
    Kind kind = Kind::Undecided;
    std::optional<SolutionWitness> witness;  // Member
    std::set<Int> exclusion;                 // NonMember
    std::optional<OracleVerdict> reason;     // NonMember
    unsigned rounds_used = 0;
    unsigned long max_height = 0;
};

/// The dovetailed membership procedure: round k searches for a solution
/// at height 2^k and asks the oracle about every exclusion set drawn
/// from the first k primes outside W.  First certificate wins; Undecided
/// only on budget exhaustion (including a solver resource trip, which is
/// reported as honest ignorance rather than exhaustion).
inline PhiResult phi_decide(const Polynomial& f, const SubringDescriptor& w,
                            const PhiBudget& budget = {}) {
    if (f.is_zero()) throw domain_error("phi_decide: zero polynomial");
    PhiResult result;
    std::set<std::string> asked;
    for (unsigned k = 1; k <= budget.rounds; ++k) {
        result.rounds_used = k;
        unsigned long h = 1UL << k;
        try {
            SearchOutcome out = search(f, w, h, budget.limits);
            result.max_height = h;
            if (out.found()) {
                result.kind = PhiResult::Kind::Member;
                result.witness = out.witness;
                return result;
            }
        } catch (const resource_limit_error&) {
            return result;
        }
        std::vector<Int> pool = detail::complement_primes(
            w, k, budget.complement_scan);
        for (const std::set<Int>& a0 : detail::subsets_in_order(pool)) {
            std::string key;
            for (const Int& p : a0) key += p.get_str() + ",";
            if (!asked.insert(key).second) continue;
            auto verdict = decide_family_member(
                f, SubringDescriptor::cofinite_exclude(a0),
                budget.limits.factor_bound);
            if (!verdict.has_value()) break;  // outside oracle family
            if (!verdict->solvable) {
                result.kind = PhiResult::Kind::NonMember;
                result.exclusion = a0;
                result.reason = std::move(*verdict);
                return result;
            }
        }
    }
    return result;
}

struct GenericCheckResult {
    std::vector<PhiResult> results;
    bool passes = false;
};

/// Finite-budget genericity check: W passes iff phi decides every listed
/// polynomial.  Necessary evidence only, never a proof of genericity.
inline GenericCheckResult generic_check(const SubringDescriptor& w,
                                        const std::vector<Polynomial>& fs,
                                        const PhiBudget& budget = {}) {
    GenericCheckResult out;
    out.passes = true;
    for (const Polynomial& f : fs) {
        PhiResult r = phi_decide(f, w, budget);
        if (r.kind == PhiResult::Kind::Undecided) out.passes = false;
        out.results.push_back(std::move(r));
    }
    return out;
}

struct NowhereDenseBudget {
    std::size_t max_length = 12;
    unsigned long factor_bound = kDefaultFactorBound;
};

struct NowhereDenseResult {
    bool decided = false;
    Condition tau;
    std::optional<CylinderCertificate> certificate;
    std::size_t examined = 0;
    std::string note;
};

/// Walks extensions tau of sigma in canonical order (length ascending,
/// lexicographic with 0 < 1) until one is decided by the oracle: either
/// f solvable in the ones-only ring of tau (Positive; witness support is
/// covered by construction) or insolvable in R_{P - zeros(tau)}
/// (Negative).  For oracle-family members with occurring primes of
/// bounded index this terminates; outside the family it reports failure
/// immediately.
inline NowhereDenseResult nowhere_dense_probe(
    const Polynomial& f, const Condition& sigma,
    const NowhereDenseBudget& budget = {}) {
    NowhereDenseResult result;
    if (f.is_zero())
        throw domain_error("nowhere_dense_probe: zero polynomial");
    if (!decide_family_member(f, SubringDescriptor::rationals(),
                              budget.factor_bound)
             .has_value()) {
        result.note = "polynomial outside the oracle family";
        return result;
    }
    std::vector<Condition> level{sigma};
    for (std::size_t len = sigma.length(); len <= budget.max_length;
         ++len) {
        for (const Condition& tau : level) {
            ++result.examined;
            std::set<Int> ones;
            for (const Int& p : tau.one_primes()) ones.insert(p);
            auto pos = decide_family_member(
                f, SubringDescriptor::finite_include(ones),
                budget.factor_bound);
            if (pos->solvable) {
                CylinderCertificate cert;
                cert.kind = CylinderCertificate::Kind::Positive;
                cert.target = f;
                cert.sigma = tau;
                SolutionWitness witness;
                witness.assignment = *pos->witness;
                witness.support = witness_support(witness.assignment,
                                                  budget.factor_bound);
                cert.witness = std::move(witness);
                result.decided = true;
                result.tau = tau;
                result.certificate = std::move(cert);
                return result;
            }
            std::set<Int> zeros;
            for (const Int& p : tau.zero_primes()) zeros.insert(p);
            auto neg = decide_family_member(
                f, SubringDescriptor::cofinite_exclude(zeros),
                budget.factor_bound);
            if (!neg->solvable) {
                CylinderCertificate cert;
                cert.kind = CylinderCertificate::Kind::Negative;
                cert.target = f;
                cert.sigma = tau;
                cert.reason = std::move(*neg);
                result.decided = true;
                result.tau = tau;
                result.certificate = std::move(cert);
                return result;
            }
        }
        std::vector<Condition> next;
        next.reserve(level.size() * 2);
        for (const Condition& tau : level) {
            next.push_back(tau.extended(false));
            next.push_back(tau.extended(true));
        }
        level = std::move(next);
    }
    result.note = "budget exhausted";
    return result;
}

}  // namespace htpq
