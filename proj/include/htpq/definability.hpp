#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "solver.hpp"

namespace htpq {

/// A claimed copy of (Z, +, *) inside a subring: tuples of width n form
/// the domain when h vanishes (variables 0..n-1 are the tuple slots,
/// higher ids are existential auxiliaries), and h_plus / h_times relate
/// three stacked tuples (slots 0..3n-1) the same way.
struct DiophantineModelSpec {
    std::size_t width = 1;
    Polynomial h;
    Polynomial h_plus;
    Polynomial h_times;
};

enum class FactStatus { Verified, Refuted, Inconclusive };

inline std::string fact_status_text(FactStatus s) {
    switch (s) {
        case FactStatus::Verified: return "verified";
        case FactStatus::Refuted: return "refuted";
        case FactStatus::Inconclusive: return "inconclusive";
    }
    throw domain_error("fact_status_text: bad status");
}

struct FactReport {
    std::string fact;
    FactStatus status = FactStatus::Inconclusive;
    std::string note;
};

struct ModelCheckReport {
    std::vector<FactReport> facts;
    std::map<long, std::vector<Rat>> representatives;
    std::size_t domain_sampled = 0;
    bool refuted = false;
    bool complete = false;
    std::string summary;
};

namespace detail {

enum class RelationStatus { Holds, Fails, Unknown };

/// Decide rel(args, aux) = 0 for some aux in the subring, up to the
/// height budget.  Definite answers come only from constant residuals;
/// a solver miss stays Unknown.
inline RelationStatus relation_status(const Polynomial& rel,
                                      const std::vector<Rat>& args,
                                      const SubringDescriptor& w,
                                      unsigned long H,
                                      const SearchLimits& limits) {
    RationalPolynomial residual = to_rational(rel);
    for (std::size_t i = 0; i < args.size(); ++i)
        residual = residual.substitute(static_cast<VarId>(i), args[i]);
    if (residual.is_zero()) return RelationStatus::Holds;
    if (residual.variables().empty()) return RelationStatus::Fails;
    try {
        SearchOutcome out = search(clear_denominators(residual), w, H, limits);
        return out.found() ? RelationStatus::Holds : RelationStatus::Unknown;
    } catch (const resource_limit_error&) {
        return RelationStatus::Unknown;
    }
}

inline std::string tuple_text(const std::vector<Rat>& t) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out << ", ";
        out << t[i];
    }
    out << ")";
    return out.str();
}

inline Int tuple_height(const std::vector<Rat>& t) {
    Int h(1);
    for (const Rat& q : t) h = std::max(h, height(q));
    return h;
}

inline bool tuple_less(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Int ha = tuple_height(a);
    Int hb = tuple_height(b);
    if (ha != hb) return ha < hb;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = coordinate_compare(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

inline std::vector<Rat> stack_tuples(const std::vector<Rat>& a,
                                     const std::vector<Rat>& b,
                                     const std::vector<Rat>& c) {
    std::vector<Rat> args;
    args.reserve(a.size() + b.size() + c.size());
    args.insert(args.end(), a.begin(), a.end());
    args.insert(args.end(), b.begin(), b.end());
    args.insert(args.end(), c.begin(), c.end());
    return args;
}

}  // namespace detail

/// Soundness check of the necessary conditions for spec to model Z in
/// R_W, at budget (range, H).  Representatives are discovered from the
/// anchors 0 (the d with d+d=d) and 1 (the d != 0 with d*d=d) by
/// successor / predecessor induction over the height-H candidate grid,
/// taking the least tuple in canonical order when the bounded
/// uniqueness scan turns up several; duplicates are themselves reported
/// as refutation evidence.  Extra claimed representatives can be
/// injected for cross-examination.  The check refutes or stays
/// inconclusive; it never certifies a model.
inline ModelCheckReport check_model(
    const DiophantineModelSpec& spec, const SubringDescriptor& w,
    long range, unsigned long H, const SearchLimits& limits = {},
    const std::map<long, std::vector<Rat>>& injected = {}) {
    if (spec.width == 0) throw domain_error("check_model: zero tuple width");
    if (range < 1) throw domain_error("check_model: range must be >= 1");
    for (const auto& [k, t] : injected)
        if (t.size() != spec.width)
            throw domain_error("check_model: injected tuple width mismatch");

    const std::size_t n = spec.width;
    ModelCheckReport report;

    auto domain_status = [&](const std::vector<Rat>& t) {
        return detail::relation_status(spec.h, t, w, H, limits);
    };
    auto plus_status = [&](const std::vector<Rat>& a, const std::vector<Rat>& b,
                           const std::vector<Rat>& c) {
        return detail::relation_status(spec.h_plus,
                                       detail::stack_tuples(a, b, c), w, H,
                                       limits);
    };
    auto times_status = [&](const std::vector<Rat>& a,
                            const std::vector<Rat>& b,
                            const std::vector<Rat>& c) {
        return detail::relation_status(spec.h_times,
                                       detail::stack_tuples(a, b, c), w, H,
                                       limits);
    };

    // Sample the domain: every n-tuple over the height-H candidates
    // whose h-membership is settled positively at this budget.
    auto cands = shared_candidates(w, H);
    {
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            total *= cands->size();
            if (total > 200000)
                throw resource_limit_error("check_model: tuple grid too large");
        }
    }
    std::vector<std::vector<Rat>> domain;
    {
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::vector<Rat> t;
            t.reserve(n);
            for (std::size_t i = 0; i < n; ++i) t.push_back(cands->value(idx[i]));
            if (domain_status(t) == detail::RelationStatus::Holds)
                domain.push_back(std::move(t));
            std::size_t i = n;
            while (i > 0 && ++idx[i - 1] == cands->size()) idx[--i] = 0;
            if (i == 0) break;
        }
        std::sort(domain.begin(), domain.end(), detail::tuple_less);
    }
    report.domain_sampled = domain.size();

    std::map<long, std::vector<Rat>> reps;

    // Bounded uniqueness scan: collect every domain tuple satisfying the
    // defining relation of k, report duplicates, keep the least.
    auto discover = [&](long k, const std::string& fact_name, auto&& defining) {
        std::vector<const std::vector<Rat>*> hits;
        for (const auto& t : domain) {
            if (defining(t) != detail::RelationStatus::Holds) continue;
            hits.push_back(&t);
            if (hits.size() > 4) break;
        }
        if (hits.empty()) {
            report.facts.push_back({fact_name, FactStatus::Inconclusive,
                                    "no representative found at height " +
                                        std::to_string(H)});
            return;
        }
        if (hits.size() > 1) {
            report.facts.push_back(
                {fact_name, FactStatus::Refuted,
                 "uniqueness sampling found distinct representatives " +
                     detail::tuple_text(*hits[0]) + " and " +
                     detail::tuple_text(*hits[1]) +
                     "; continuing with the least"});
        } else {
            report.facts.push_back({fact_name, FactStatus::Verified,
                                    "representative " +
                                        detail::tuple_text(*hits[0]) +
                                        " (least-height choice)"});
        }
        reps[k] = *hits[0];
    };

    discover(0, "anchor 0: d + d = d",
             [&](const std::vector<Rat>& d) { return plus_status(d, d, d); });
    discover(1, "anchor 1: d * d = d, d distinct from 0",
             [&](const std::vector<Rat>& d) {
                 if (reps.count(0) && d == reps.at(0))
                     return detail::RelationStatus::Fails;
                 return times_status(d, d, d);
             });
    for (long k = 2; k <= range; ++k) {
        if (!reps.count(k - 1) || !reps.count(1)) {
            report.facts.push_back(
                {"representative " + std::to_string(k), FactStatus::Inconclusive,
                 "missing prerequisite representative"});
            continue;
        }
        discover(k, "representative " + std::to_string(k),
                 [&](const std::vector<Rat>& d) {
                     return plus_status(reps.at(k - 1), reps.at(1), d);
                 });
    }
    for (long k = -1; k >= -range; --k) {
        if (!reps.count(k + 1) || !reps.count(1)) {
            report.facts.push_back(
                {"representative " + std::to_string(k), FactStatus::Inconclusive,
                 "missing prerequisite representative"});
            continue;
        }
        discover(k, "representative " + std::to_string(k),
                 [&](const std::vector<Rat>& d) {
                     return plus_status(d, reps.at(1), reps.at(k + 1));
                 });
    }

    // Cross-examine injected representatives against the sampled model.
    for (const auto& [k, t] : injected) {
        std::string name = "injected representative " + std::to_string(k);
        bool in_ring = true;
        for (const Rat& q : t)
            if (!w.contains_rational(q, limits.factor_bound)) in_ring = false;
        if (!in_ring) {
            report.facts.push_back(
                {name, FactStatus::Refuted, "coordinate outside the subring"});
            continue;
        }
        detail::RelationStatus dom = domain_status(t);
        if (dom == detail::RelationStatus::Fails) {
            report.facts.push_back(
                {name, FactStatus::Refuted, "not in the domain"});
            continue;
        }
        detail::RelationStatus def = detail::RelationStatus::Unknown;
        bool have_def = false;
        if (k == 0) {
            def = plus_status(t, t, t);
            have_def = true;
        } else if (k == 1) {
            def = times_status(t, t, t);
            if (reps.count(0) && t == reps.at(0))
                def = detail::RelationStatus::Fails;
            have_def = true;
        } else if (k >= 2 && reps.count(k - 1) && reps.count(1)) {
            def = plus_status(reps.at(k - 1), reps.at(1), t);
            have_def = true;
        } else if (k <= -1 && reps.count(k + 1) && reps.count(1)) {
            def = plus_status(t, reps.at(1), reps.at(k + 1));
            have_def = true;
        }
        if (have_def && def == detail::RelationStatus::Fails) {
            report.facts.push_back(
                {name, FactStatus::Refuted,
                 "does not satisfy the defining relation of " +
                     std::to_string(k)});
            continue;
        }
        if (reps.count(k) && reps.at(k) != t) {
            report.facts.push_back(
                {name, FactStatus::Refuted,
                 "uniqueness sampling: the distinct tuple " +
                     detail::tuple_text(reps.at(k)) + " already represents " +
                     std::to_string(k)});
            continue;
        }
        if (!have_def || dom == detail::RelationStatus::Unknown ||
            def == detail::RelationStatus::Unknown) {
            report.facts.push_back({name, FactStatus::Inconclusive,
                                    "not settled at height " +
                                        std::to_string(H)});
            continue;
        }
        report.facts.push_back({name, FactStatus::Verified,
                                "consistent with the sampled model"});
    }

    // Arithmetic facts over the represented window, in canonical order.
    auto arithmetic_fact = [&](long a, long b, long c, char op, auto&& rel) {
        std::ostringstream name;
        name << a << " " << op << " " << b << " = " << c;
        if (!reps.count(a) || !reps.count(b) || !reps.count(c)) {
            report.facts.push_back({name.str(), FactStatus::Inconclusive,
                                    "missing representative"});
            return;
        }
        switch (rel(reps.at(a), reps.at(b), reps.at(c))) {
            case detail::RelationStatus::Holds:
                report.facts.push_back({name.str(), FactStatus::Verified, ""});
                break;
            case detail::RelationStatus::Fails:
                report.facts.push_back({name.str(), FactStatus::Refuted,
                                        "relation excluded exactly"});
                break;
            case detail::RelationStatus::Unknown:
                report.facts.push_back({name.str(), FactStatus::Inconclusive,
                                        "no witness at height " +
                                            std::to_string(H)});
                break;
        }
    };
    for (long a = -range; a <= range; ++a)
        for (long b = -range; b <= range; ++b) {
            if (std::abs(a + b) <= range)
                arithmetic_fact(a, b, a + b, '+', plus_status);
            if (std::abs(a * b) <= range)
                arithmetic_fact(a, b, a * b, '*', times_status);
        }

    report.representatives = reps;
    std::size_t refuted = 0;
    std::size_t unsettled = 0;
    for (const FactReport& f : report.facts) {
        if (f.status == FactStatus::Refuted) ++refuted;
        if (f.status == FactStatus::Inconclusive) ++unsettled;
    }
    report.refuted = refuted > 0;
    report.complete = unsettled == 0;
    std::ostringstream summary;
    if (report.refuted)
        summary << "refuted: " << refuted << " fact(s) failed";
    else if (!report.complete)
        summary << "incomplete: " << unsettled << " fact(s) unsettled";
    else
        summary << "all " << report.facts.size()
                << " facts verified; necessary conditions only";
    summary << " at budget (range=" << range << ", height=" << H << ")";
    report.summary = summary.str();
    return report;
}

/// A claimed existential definition of Z inside a subring: q is an
/// integer exactly when g(q, aux) = 0 for some aux in the subring.  The
/// designated variable holds the probe; every other variable is
/// auxiliary.
struct ExistentialDefSpec {
    Polynomial g;
    VarId x = 0;
};

enum class ProbeVerdict {
    Satisfied,
    ConsistentAtBudget,
    Refuted,
    Inconclusive,
    SkippedNotInRing
};

inline std::string probe_verdict_text(ProbeVerdict s) {
    switch (s) {
        case ProbeVerdict::Satisfied: return "satisfied";
        case ProbeVerdict::ConsistentAtBudget: return "consistent-at-budget";
        case ProbeVerdict::Refuted: return "refuted";
        case ProbeVerdict::Inconclusive: return "inconclusive";
        case ProbeVerdict::SkippedNotInRing: return "skipped-not-in-ring";
    }
    throw domain_error("probe_verdict_text: bad status");
}

struct ProbeReport {
    Rat probe;
    ProbeVerdict status = ProbeVerdict::Inconclusive;
    std::string note;
};

struct ExistentialDefReport {
    std::vector<ProbeReport> probes;
    bool refuted = false;
    bool complete = false;
    std::string summary;
};

/// Probe-based scrutiny of an existential definition of Z.  An integer
/// probe wants a witness (a miss is only inconclusive); a non-integer
/// probe with a witness is a definitive refutation, and exhaustion on
/// it is consistency evidence.  The strongest positive outcome is
/// consistency at the budget, never more.
inline ExistentialDefReport check_existential_def(
    const ExistentialDefSpec& spec, const SubringDescriptor& w,
    const std::vector<Rat>& probes, unsigned long H,
    const SearchLimits& limits = {}) {
    if (probes.empty())
        throw domain_error("check_existential_def: no probes");
    ExistentialDefReport report;
    std::size_t refuted = 0;
    std::size_t unsettled = 0;
    for (const Rat& q : probes) {
        ProbeReport entry;
        entry.probe = q;
        if (!w.contains_rational(q, limits.factor_bound)) {
            entry.status = ProbeVerdict::SkippedNotInRing;
            entry.note = "probe not in the subring";
            report.probes.push_back(std::move(entry));
            continue;
        }
        bool integral = rat_den(q) == 1;
        detail::RelationStatus rs = detail::RelationStatus::Unknown;
        {
            // Substitute only the designated variable; aux ids keep their
            // positions for the residual search.
            RationalPolynomial residual = spec.g.substitute(spec.x, q);
            if (residual.is_zero()) {
                rs = detail::RelationStatus::Holds;
            } else if (residual.variables().empty()) {
                rs = detail::RelationStatus::Fails;
            } else {
                try {
                    SearchOutcome out =
                        search(clear_denominators(residual), w, H, limits);
                    rs = out.found() ? detail::RelationStatus::Holds
                                     : detail::RelationStatus::Unknown;
                } catch (const resource_limit_error&) {
                    rs = detail::RelationStatus::Unknown;
                }
            }
        }
        if (integral) {
            switch (rs) {
                case detail::RelationStatus::Holds:
                    entry.status = ProbeVerdict::Satisfied;
                    entry.note = "integer probe satisfied";
                    break;
                case detail::RelationStatus::Fails:
                    entry.status = ProbeVerdict::Refuted;
                    entry.note = "integer probe excluded exactly";
                    ++refuted;
                    break;
                case detail::RelationStatus::Unknown:
                    entry.status = ProbeVerdict::Inconclusive;
                    entry.note =
                        "no witness at height " + std::to_string(H);
                    ++unsettled;
                    break;
            }
        } else {
            switch (rs) {
                case detail::RelationStatus::Holds:
                    entry.status = ProbeVerdict::Refuted;
                    entry.note = "non-integer probe satisfied";
                    ++refuted;
                    break;
                case detail::RelationStatus::Fails:
                    entry.status = ProbeVerdict::ConsistentAtBudget;
                    entry.note = "non-integer probe excluded exactly";
                    break;
                case detail::RelationStatus::Unknown:
                    entry.status = ProbeVerdict::ConsistentAtBudget;
                    entry.note =
                        "no witness at height " + std::to_string(H);
                    break;
            }
        }
        report.probes.push_back(std::move(entry));
    }
    report.refuted = refuted > 0;
    report.complete = unsettled == 0;
    std::ostringstream summary;
    if (report.refuted)
        summary << "refuted on " << refuted << " probe(s)";
    else if (!report.complete)
        summary << "inconclusive on " << unsettled << " integer probe(s)";
    else
        summary << "consistent at budget";
    summary << " (probes=" << report.probes.size() << ", height=" << H << ")";
    report.summary = summary.str();
    return report;
}

}  // namespace htpq
