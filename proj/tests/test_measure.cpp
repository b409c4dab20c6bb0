#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "htpq/measure.hpp"
#include "htpq/poly_text.hpp"

using namespace htpq;

namespace {

Polynomial P(const std::string& text) { return parse_polynomial(text); }

Rat ratio(long num, long den) { return make_rational(Int(num), Int(den)); }

std::vector<Condition> conditions(const std::vector<std::string>& texts) {
    std::vector<Condition> out;
    for (const std::string& t : texts) out.push_back(Condition::parse(t));
    return out;
}

}  // namespace

TEST_CASE("pseudorandom condition stream", "[measure]") {
    Condition a = sample_condition(7, 42, 16);
    Condition b = sample_condition(7, 42, 16);
    REQUIRE(a == b);
    REQUIRE(a.length() == 16);
    REQUIRE(sample_condition(7, 42, 0).empty());

    // Truncation consistency: a longer draw extends a shorter one.
    Condition shorter = sample_condition(7, 42, 5);
    REQUIRE(shorter.is_prefix_of(a));

    // Distinct indices and distinct seeds give distinct streams.
    REQUIRE(sample_condition(7, 43, 16) != a);
    REQUIRE(sample_condition(8, 42, 16) != a);

    // Fair coin check on 10^5 draws of the first bit.
    std::size_t ones = 0;
    const std::size_t trials = 100000;
    for (std::size_t i = 0; i < trials; ++i)
        if (sample_condition(11, i, 1).bit(0)) ++ones;
    REQUIRE(ones > trials * 49 / 100);
    REQUIRE(ones < trials * 51 / 100);
}

TEST_CASE("cylinder union measure on worked examples", "[measure]") {
    REQUIRE(cylinder_union_measure({}) == 0);
    REQUIRE(cylinder_union_measure(conditions({"101"})) == ratio(1, 8));
    REQUIRE(cylinder_union_measure(conditions({"0", "1"})) == 1);
    REQUIRE(cylinder_union_measure(conditions({"1", "01"})) == ratio(3, 4));
    REQUIRE(cylinder_union_measure(conditions({""})) == 1);
    // Nested cylinders do not double count.
    REQUIRE(cylinder_union_measure(conditions({"1", "10"})) == ratio(1, 2));
    REQUIRE(cylinder_union_measure(conditions({"1", "10", "101"})) ==
            ratio(1, 2));
    REQUIRE(cylinder_union_measure(
                conditions({"00", "01", "10", "11"})) == 1);
}

TEST_CASE("cylinder union agrees with direct enumeration", "[measure]") {
    std::mt19937_64 rng(20260814);
    std::uniform_int_distribution<int> len_dist(0, 6);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Condition> sigmas;
        int count = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) {
            std::vector<bool> bits;
            int len = len_dist(rng);
            for (int j = 0; j < len; ++j) bits.push_back(coin(rng) == 1);
            sigmas.emplace_back(std::move(bits));
        }
        // Ground truth: fraction of the 2^6 leaves below some condition.
        std::size_t covered = 0;
        for (std::size_t mask = 0; mask < 64; ++mask) {
            std::vector<bool> leaf;
            for (int j = 0; j < 6; ++j) leaf.push_back((mask >> j) & 1);
            Condition leaf_cond(std::move(leaf));
            for (const Condition& sigma : sigmas)
                if (sigma.is_prefix_of(leaf_cond)) {
                    ++covered;
                    break;
                }
        }
        REQUIRE(cylinder_union_measure(sigmas) ==
                make_rational(Int(covered), Int(64)));
    }
}

TEST_CASE("measure estimates on decided polynomials", "[measure]") {
    // x0 = 3 holds in every subring, so every sample hits.
    MeasureEstimate always = estimate_measure_A(P("x0 - 3"), 5, 200, 1);
    REQUIRE(always.value == 1);
    REQUIRE(always.ci_low == 1);
    REQUIRE(always.ci_high == 1);

    // x0^2 + 1 = 0 has no real solution, so no sample hits.
    MeasureEstimate never = estimate_measure_A(P("x0^2 + 1"), 5, 200, 1);
    REQUIRE(never.value == 0);
    REQUIRE(never.ci_low == 0);
    REQUIRE(never.ci_high == 0);

    REQUIRE_THROWS_AS(estimate_measure_A(P("0"), 5, 10, 1), domain_error);
    REQUIRE_THROWS_AS(estimate_measure_A(P("x0"), 5, 0, 1), domain_error);
}

TEST_CASE("estimate lands near the exact measure", "[measure]") {
    // 5(x0^2 + x1^2) = 1 is solvable exactly over the rings containing
    // 1/5, a set of measure 1/2.  The witness (1/5, 2/5) has height 5.
    Polynomial f = P("5*x0^2 + 5*x1^2 - 1");
    MeasureEstimate est = estimate_measure_A(f, 10, 2000, 3);
    REQUIRE(est.ci_low <= est.value);
    REQUIRE(est.value <= est.ci_high);
    REQUIRE(est.ci_low <= ratio(1, 2));
    REQUIRE(ratio(1, 2) <= est.ci_high);
    // 1.96 * sqrt(1/4 / 2000) is about 0.022; allow slack for the
    // rational rounding in the bound.
    REQUIRE(est.ci_high - est.ci_low < ratio(6, 100));
    REQUIRE(est.ci_high - est.ci_low > 0);

    SECTION("deterministic and thread-count independent") {
        MeasureEstimate again = estimate_measure_A(f, 10, 2000, 3);
        REQUIRE(again == est);
        SearchLimits limits;
        limits.jobs = 4;
        MeasureEstimate wide = estimate_measure_A(f, 10, 2000, 3, limits);
        REQUIRE(wide.value == est.value);
        REQUIRE(wide.ci_low == est.ci_low);
        REQUIRE(wide.ci_high == est.ci_high);
    }

    SECTION("monotone in the height budget at fixed seed") {
        // Raising H both extends each sampled condition (larger ring)
        // and deepens the search, so per-sample hits only turn on.
        Rat prev(-1);
        for (unsigned long H : {2ul, 5ul, 8ul, 12ul}) {
            MeasureEstimate e = estimate_measure_A(f, H, 500, 9);
            REQUIRE(e.value >= prev);
            prev = e.value;
        }
        REQUIRE(prev > 0);
    }
}

TEST_CASE("boundary gap on certified examples", "[measure]") {
    SECTION("both sides certified, zero gap") {
        BoundaryGapReport r =
            boundary_gap(P("5*x0^2 + 5*x1^2 - 1"), 8, 3, 400, 5);
        REQUIRE(r.lower_A == ratio(1, 2));
        REQUIRE(r.lower_comp == ratio(1, 2));
        REQUIRE(r.gap == 0);
        REQUIRE(r.oracle_family);
        REQUIRE(r.estimate.ci_low <= ratio(1, 2));
        REQUIRE(ratio(1, 2) <= r.estimate.ci_high);
    }

    SECTION("complement everywhere") {
        // 7 is not a sum of two rational squares, in any subring.
        BoundaryGapReport r = boundary_gap(P("x0^2 + x1^2 - 7"), 6, 2, 50, 5);
        REQUIRE(r.lower_A == 0);
        REQUIRE(r.lower_comp == 1);
        REQUIRE(r.gap == 0);
        REQUIRE(r.estimate.value == 0);
    }

    SECTION("solution set everywhere") {
        BoundaryGapReport r = boundary_gap(P("x0 - 3"), 5, 2, 50, 5);
        REQUIRE(r.lower_A == 1);
        REQUIRE(r.lower_comp == 0);
        REQUIRE(r.gap == 0);
        REQUIRE(r.estimate.value == 1);
    }

    SECTION("outside the oracle family the gap stays honest") {
        BoundaryGapReport r = boundary_gap(P("x0^3 - 2"), 6, 2, 50, 5);
        REQUIRE_FALSE(r.oracle_family);
        REQUIRE(r.lower_A == 0);
        REQUIRE(r.lower_comp == 0);
        REQUIRE(r.gap == 1);
    }
}

TEST_CASE("exact class measure for family members", "[measure]") {
    REQUIRE(exact_family_measure(P("5*x0^2 + 5*x1^2 - 1")) == ratio(1, 2));
    REQUIRE(exact_family_measure(P("x0^2 + x1^2 - 2")) == ratio(1, 1));
    REQUIRE(exact_family_measure(P("x0^2 + x1^2 - 7")) == ratio(0, 1));
    // 1/10 needs both 2 and 5 inverted.
    REQUIRE(exact_family_measure(P("10*x0^2 + 10*x1^2 - 1")) == ratio(1, 4));
    REQUIRE(exact_family_measure(P("15*x0 - 2")) == ratio(1, 4));
    REQUIRE(exact_family_measure(P("x0 - 3")) == 1);
    REQUIRE(exact_family_measure(P("3*x0^2 - 5*x1^2 + x2^2")) == 1);
    REQUIRE_FALSE(exact_family_measure(P("x0^3 - 2")).has_value());

    SECTION("agrees with the Monte Carlo estimate") {
        Polynomial f = P("10*x0^2 + 10*x1^2 - 1");
        Rat exact = *exact_family_measure(f);
        MeasureEstimate est = estimate_measure_A(f, 12, 2000, 17);
        REQUIRE(est.ci_low <= exact);
        REQUIRE(exact <= est.ci_high);
    }
}

TEST_CASE("estimator calibration across seeds", "[measure]") {
    // Mini version of the calibration run: the estimate should sit
    // within 0.035 of the exact value 1/2 for nearly every seed.
    Polynomial f = P("5*x0^2 + 5*x1^2 - 1");
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MeasureEstimate est = estimate_measure_A(f, 10, 2000, seed);
        Rat err = est.value - ratio(1, 2);
        if (err < 0) err = -err;
        if (err <= ratio(35, 1000)) ++within;
    }
    REQUIRE(within >= 9);
}
