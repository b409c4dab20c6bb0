#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "htpq/definability.hpp"
#include "htpq/poly_text.hpp"

using namespace htpq;

namespace {

Polynomial P(const std::string& text) { return parse_polynomial(text); }

// The identity model: every ring element represents itself, addition
// and multiplication are the ambient ones.  A genuine model exactly
// when the ring is Z.
DiophantineModelSpec identity_model() {
    DiophantineModelSpec spec;
    spec.width = 1;
    spec.h = Polynomial();
    spec.h_plus = P("x0 + x1 - x2");
    spec.h_times = P("x0*x1 - x2");
    return spec;
}

const FactReport* find_fact(const ModelCheckReport& r,
                            const std::string& name) {
    for (const FactReport& f : r.facts)
        if (f.fact == name) return &f;
    return nullptr;
}

bool mentions(const std::string& text, const std::string& word) {
    return text.find(word) != std::string::npos;
}

}  // namespace

TEST_CASE("identity model of the integers verifies its facts",
          "[definability]") {
    ModelCheckReport r =
        check_model(identity_model(), SubringDescriptor::integers(), 5, 20);
    REQUIRE_FALSE(r.refuted);
    REQUIRE(r.complete);
    REQUIRE(mentions(r.summary, "verified"));
    for (const FactReport& f : r.facts)
        REQUIRE(f.status == FactStatus::Verified);
    // Representatives are the integers themselves, found least first.
    for (long k = -5; k <= 5; ++k) {
        REQUIRE(r.representatives.count(k) == 1);
        REQUIRE(r.representatives.at(k) == std::vector<Rat>{Rat(k)});
    }
    REQUIRE(r.domain_sampled == 41);

    SECTION("deterministic across runs") {
        ModelCheckReport again = check_model(
            identity_model(), SubringDescriptor::integers(), 5, 20);
        REQUIRE(again.summary == r.summary);
        REQUIRE(again.facts.size() == r.facts.size());
        for (std::size_t i = 0; i < r.facts.size(); ++i) {
            REQUIRE(again.facts[i].fact == r.facts[i].fact);
            REQUIRE(again.facts[i].status == r.facts[i].status);
        }
    }
}

TEST_CASE("perturbed addition relation is refuted", "[definability]") {
    DiophantineModelSpec spec = identity_model();
    spec.h_plus = P("x0 + x1 - x2 - 1");
    ModelCheckReport r =
        check_model(spec, SubringDescriptor::integers(), 5, 20);
    REQUIRE(r.refuted);
    REQUIRE(mentions(r.summary, "refuted"));
    std::size_t failures = 0;
    for (const FactReport& f : r.facts)
        if (f.status == FactStatus::Refuted) ++failures;
    REQUIRE(failures > 0);
}

TEST_CASE("injected representatives are cross-examined", "[definability]") {
    SubringDescriptor half = SubringDescriptor::finite_include({Int(2)});

    SECTION("a non-integer tuple refutes") {
        std::map<long, std::vector<Rat>> injected{
            {1, {make_rational(Int(1), Int(2))}}};
        ModelCheckReport r =
            check_model(identity_model(), half, 3, 10, {}, injected);
        const FactReport* f = find_fact(r, "injected representative 1");
        REQUIRE(f != nullptr);
        REQUIRE(f->status == FactStatus::Refuted);
        REQUIRE(mentions(f->note, "defining relation"));
        REQUIRE(r.refuted);
    }

    SECTION("a consistent tuple verifies") {
        std::map<long, std::vector<Rat>> injected{{2, {Rat(2)}}};
        ModelCheckReport r =
            check_model(identity_model(), half, 3, 10, {}, injected);
        const FactReport* f = find_fact(r, "injected representative 2");
        REQUIRE(f != nullptr);
        REQUIRE(f->status == FactStatus::Verified);
    }

    SECTION("a tuple outside the ring refutes") {
        std::map<long, std::vector<Rat>> injected{
            {1, {make_rational(Int(1), Int(3))}}};
        ModelCheckReport r =
            check_model(identity_model(), half, 2, 10, {}, injected);
        const FactReport* f = find_fact(r, "injected representative 1");
        REQUIRE(f != nullptr);
        REQUIRE(f->status == FactStatus::Refuted);
        REQUIRE(mentions(f->note, "subring"));
    }
}

TEST_CASE("empty domain reports all facts missing", "[definability]") {
    DiophantineModelSpec spec = identity_model();
    spec.h = P("x0^2 + 1");
    ModelCheckReport r =
        check_model(spec, SubringDescriptor::integers(), 3, 15);
    REQUIRE(r.domain_sampled == 0);
    REQUIRE_FALSE(r.refuted);
    REQUIRE_FALSE(r.complete);
    for (const FactReport& f : r.facts)
        REQUIRE(f.status == FactStatus::Inconclusive);
    REQUIRE(mentions(r.summary, "incomplete"));
}

TEST_CASE("duplicate representatives are refutation evidence",
          "[definability]") {
    DiophantineModelSpec spec = identity_model();
    // d + d = d now has the two solutions d = 0 and d = 1.
    spec.h_plus = P("(x0 + x1 - x2)*(x0 + x1 - x2 - 1)");
    ModelCheckReport r =
        check_model(spec, SubringDescriptor::integers(), 2, 10);
    const FactReport* f = find_fact(r, "anchor 0: d + d = d");
    REQUIRE(f != nullptr);
    REQUIRE(f->status == FactStatus::Refuted);
    REQUIRE(mentions(f->note, "uniqueness"));
    REQUIRE(r.refuted);
}

TEST_CASE("model checker input validation", "[definability]") {
    DiophantineModelSpec bad = identity_model();
    bad.width = 0;
    REQUIRE_THROWS_AS(
        check_model(bad, SubringDescriptor::integers(), 2, 10), domain_error);
    REQUIRE_THROWS_AS(
        check_model(identity_model(), SubringDescriptor::integers(), 0, 10),
        domain_error);
    std::map<long, std::vector<Rat>> wide{{0, {Rat(0), Rat(0)}}};
    REQUIRE_THROWS_AS(check_model(identity_model(),
                                  SubringDescriptor::integers(), 2, 10, {},
                                  wide),
                      domain_error);
    DiophantineModelSpec pair = identity_model();
    pair.width = 2;
    REQUIRE_THROWS_AS(
        check_model(pair, SubringDescriptor::rationals(), 1, 20),
        resource_limit_error);
}

TEST_CASE("existential definition worked examples", "[definability]") {
    ExistentialDefSpec everything;
    everything.g = Polynomial();

    SECTION("zero polynomial over the integers is consistent") {
        std::vector<Rat> probes;
        for (long k = -2; k <= 2; ++k) probes.push_back(Rat(k));
        ExistentialDefReport r = check_existential_def(
            everything, SubringDescriptor::integers(), probes, 10);
        REQUIRE_FALSE(r.refuted);
        REQUIRE(r.complete);
        for (const ProbeReport& p : r.probes)
            REQUIRE(p.status == ProbeVerdict::Satisfied);
        REQUIRE(mentions(r.summary, "consistent at budget"));
    }

    SECTION("zero polynomial over a larger ring is refuted by 1/2") {
        std::vector<Rat> probes{Rat(0), Rat(1),
                                make_rational(Int(1), Int(2))};
        ExistentialDefReport r = check_existential_def(
            everything, SubringDescriptor::finite_include({Int(2)}), probes,
            10);
        REQUIRE(r.refuted);
        REQUIRE(r.probes[2].status == ProbeVerdict::Refuted);
        REQUIRE(mentions(r.probes[2].note, "non-integer"));
    }

    SECTION("a zero set forced to {0,1} stays consistent on {0,1,1/2}") {
        ExistentialDefSpec spec;
        spec.g = P("x1^2 + (x0^2 - x0)^2");
        std::vector<Rat> probes{Rat(0), Rat(1),
                                make_rational(Int(1), Int(2))};
        ExistentialDefReport r = check_existential_def(
            spec, SubringDescriptor::finite_include({Int(2)}), probes, 8);
        REQUIRE_FALSE(r.refuted);
        REQUIRE(r.complete);
        REQUIRE(r.probes[0].status == ProbeVerdict::Satisfied);
        REQUIRE(r.probes[1].status == ProbeVerdict::Satisfied);
        REQUIRE(r.probes[2].status == ProbeVerdict::ConsistentAtBudget);
    }

    SECTION("probes outside the ring are skipped with a note") {
        std::vector<Rat> probes{make_rational(Int(1), Int(2)), Rat(1)};
        ExistentialDefReport r = check_existential_def(
            everything, SubringDescriptor::integers(), probes, 5);
        REQUIRE(r.probes[0].status == ProbeVerdict::SkippedNotInRing);
        REQUIRE(mentions(r.probes[0].note, "not in the subring"));
        REQUIRE(r.probes[1].status == ProbeVerdict::Satisfied);
    }

    SECTION("an excluded integer probe refutes exactly") {
        ExistentialDefSpec spec;
        spec.g = P("x0^2 + 1");
        ExistentialDefReport r = check_existential_def(
            spec, SubringDescriptor::integers(), {Rat(2)}, 5);
        REQUIRE(r.refuted);
        REQUIRE(r.probes[0].status == ProbeVerdict::Refuted);
        REQUIRE(mentions(r.probes[0].note, "excluded exactly"));
    }

    SECTION("a missed integer witness is only inconclusive") {
        ExistentialDefSpec spec;
        spec.g = P("x1^2 + x0");
        ExistentialDefReport r = check_existential_def(
            spec, SubringDescriptor::integers(), {Rat(-4), Rat(2)}, 10);
        REQUIRE_FALSE(r.refuted);
        REQUIRE_FALSE(r.complete);
        REQUIRE(r.probes[0].status == ProbeVerdict::Satisfied);
        REQUIRE(r.probes[1].status == ProbeVerdict::Inconclusive);
        REQUIRE(mentions(r.summary, "inconclusive"));
    }

    SECTION("no probes is a usage error") {
        REQUIRE_THROWS_AS(check_existential_def(
                              everything, SubringDescriptor::integers(), {}, 5),
                          domain_error);
    }
}

TEST_CASE("report vocabulary stays three-valued", "[definability]") {
    // Neither checker may ever print a claim of outright correctness;
    // scan every produced string for the forbidden stem.
    std::vector<std::string> corpus;
    ModelCheckReport model =
        check_model(identity_model(), SubringDescriptor::integers(), 4, 15);
    corpus.push_back(model.summary);
    for (const FactReport& f : model.facts) {
        corpus.push_back(f.fact);
        corpus.push_back(f.note);
        corpus.push_back(fact_status_text(f.status));
    }
    ExistentialDefSpec spec;
    spec.g = P("x1^2 + (x0^2 - x0)^2");
    ExistentialDefReport ex = check_existential_def(
        spec, SubringDescriptor::finite_include({Int(2)}),
        {Rat(0), Rat(1), make_rational(Int(1), Int(2))}, 8);
    corpus.push_back(ex.summary);
    for (const ProbeReport& p : ex.probes) {
        corpus.push_back(p.note);
        corpus.push_back(probe_verdict_text(p.status));
    }
    for (const std::string& text : corpus)
        REQUIRE_FALSE(mentions(text, "valid"));
}
