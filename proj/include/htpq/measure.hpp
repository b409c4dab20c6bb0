#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "category.hpp"
#include "quadratic.hpp"
#include "solver.hpp"

namespace htpq {

/// Exact fair-coin measure of the solvability class for oracle family
/// members.  A solvable verdict over Q comes with a witness whose
/// denominator support S is exactly the set of primes that must be
/// inverted: membership is monotone and f is solvable over R_W iff
/// S is contained in W, so the class has measure 2^-|S| (and measure 0
/// when even Q admits no solution).
inline std::optional<Rat> exact_family_measure(
    const Polynomial& f,
    unsigned long factor_bound = kDefaultFactorBound) {
    auto verdict =
        decide_family_member(f, SubringDescriptor::rationals(), factor_bound);
    if (!verdict) return std::nullopt;
    if (!verdict->solvable) return Rat(0);
    if (!verdict->witness)
        throw domain_error("exact_family_measure: witness missing");
    std::set<Int> support = witness_support(*verdict->witness, factor_bound);
    Int den(1);
    for (std::size_t i = 0; i < support.size(); ++i) den *= 2;
    return make_rational(Int(1), den);
}

/// Length-L condition whose bit i is a pure function of (seed, index, i):
/// the fair-coin sample stream, reproducible and order-free.
inline Condition sample_condition(std::uint64_t seed, std::uint64_t index,
                                  std::size_t length) {
    std::vector<bool> bits;
    bits.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        bits.push_back(prf_bit(seed, index, i));
    return Condition(std::move(bits));
}

struct MeasureEstimate {
    Rat value;
    std::uint64_t samples = 0;
    unsigned long height = 0;
    std::uint64_t seed = 0;
    Rat ci_low;
    Rat ci_high;

    bool operator==(const MeasureEstimate&) const = default;
};

namespace detail {

/// Rational upper bound on sqrt(q) for q >= 0, exact on perfect squares:
/// sqrt(a/b) = sqrt(ab)/b <= (isqrt(ab) + 1)/b.
inline Rat sqrt_upper_bound(const Rat& q) {
    if (q < 0) throw domain_error("sqrt_upper_bound: negative input");
    if (q == 0) return Rat(0);
    Int ab = rat_num(q) * rat_den(q);
    Int root = isqrt(ab);
    if (root * root != ab) root += 1;
    return make_rational(root, rat_den(q));
}

}  // namespace detail

/// Monte Carlo lower-bound statistic for mu(A(f)): the fraction of n
/// sampled conditions of length pi(H) whose ones-only subring admits a
/// witness at height <= H.  Primes beyond H cannot divide a height-<=H
/// denominator, so the truncation to pi(H) bits is exact.  The 95%
/// interval uses the normal approximation (denominator-free via a
/// rational sqrt bound); it degenerates at proportions 0 and 1, where
/// the exact certificates are the trustworthy route.
inline MeasureEstimate estimate_measure_A(const Polynomial& f,
                                          unsigned long H, std::uint64_t n,
                                          std::uint64_t seed,
                                          const SearchLimits& limits = {}) {
    if (f.is_zero())
        throw domain_error("estimate_measure_A: zero polynomial");
    if (n == 0) throw domain_error("estimate_measure_A: need samples");
    std::size_t length = primes_upto(Int(H)).size();
    std::map<std::vector<bool>, bool> verdicts;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        Condition sigma = sample_condition(seed, i, length);
        auto [it, fresh] = verdicts.try_emplace(sigma.bits(), false);
        if (fresh)
            it->second =
                search(f, descriptor_from_condition(sigma), H, limits)
                    .found();
        if (it->second) ++hits;
    }
    MeasureEstimate est;
    est.value = make_rational(Int(hits), Int(n));
    est.samples = n;
    est.height = H;
    est.seed = seed;
    Rat variance = est.value * (Rat(1) - est.value) / Rat(Int(n));
    Rat half = make_rational(Int(49), Int(25)) *
               detail::sqrt_upper_bound(variance);
    est.ci_low = est.value - half;
    if (est.ci_low < 0) est.ci_low = Rat(0);
    est.ci_high = est.value + half;
    if (est.ci_high > 1) est.ci_high = Rat(1);
    return est;
}

namespace detail {

inline Rat cylinder_merge(
    const std::vector<std::pair<const std::vector<bool>*, std::size_t>>&
        items) {
    if (items.empty()) return Rat(0);
    for (const auto& [bits, pos] : items)
        if (pos == bits->size()) return Rat(1);
    std::vector<std::pair<const std::vector<bool>*, std::size_t>> zero;
    std::vector<std::pair<const std::vector<bool>*, std::size_t>> one;
    for (const auto& [bits, pos] : items)
        ((*bits)[pos] ? one : zero).emplace_back(bits, pos + 1);
    return (cylinder_merge(zero) + cylinder_merge(one)) / 2;
}

}  // namespace detail

/// Exact dyadic measure of a union of cylinders by trie merge: a node
/// covered by some exhausted condition contributes its full mass, and
/// otherwise splits evenly between its two children.
inline Rat cylinder_union_measure(const std::vector<Condition>& sigmas) {
    std::vector<std::pair<const std::vector<bool>*, std::size_t>> items;
    items.reserve(sigmas.size());
    for (const Condition& sigma : sigmas)
        items.emplace_back(&sigma.bits(), 0);
    return detail::cylinder_merge(items);
}

/// Budgeted boundary-measure report: exact mass certified inside A(f),
/// exact mass certified inside the complement interior, and the
/// remaining gap 1 - lower_A - lower_comp, an upper bound on mu(B(f))
/// at this (depth, H) plus honest ignorance.  The Monte Carlo estimate
/// rides along for calibration.
struct BoundaryGapReport {
    Rat lower_A;
    Rat lower_comp;
    Rat gap;
    bool oracle_family = false;
    MeasureEstimate estimate;
};

inline BoundaryGapReport boundary_gap(const Polynomial& f, unsigned long H,
                                      std::size_t depth, std::uint64_t n,
                                      std::uint64_t seed,
                                      const SearchLimits& limits = {}) {
    BoundaryGapReport report;
    std::vector<Condition> pos;
    for (const CylinderCertificate& c :
         positive_certificates(f, depth, H, limits))
        pos.push_back(c.sigma);
    report.lower_A = cylinder_union_measure(pos);
    auto neg = negative_certificates(f, depth, limits.factor_bound);
    report.oracle_family = neg.has_value();
    if (neg) {
        std::vector<Condition> sigmas;
        for (const CylinderCertificate& c : *neg) sigmas.push_back(c.sigma);
        report.lower_comp = cylinder_union_measure(sigmas);
    } else {
        report.lower_comp = Rat(0);
    }
    report.gap = Rat(1) - report.lower_A - report.lower_comp;
    report.estimate = estimate_measure_A(f, H, n, seed, limits);
    return report;
}

}  // namespace htpq
