#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "htpq/poly_text.hpp"
#include "htpq/quadratic.hpp"
#include "htpq/reductions.hpp"
#include "htpq/solver.hpp"

using namespace htpq;

namespace {

Polynomial X(VarId v) { return Polynomial::variable(v); }

std::vector<Rat> to_point(const std::map<VarId, Rat>& m, std::size_t span) {
    std::vector<Rat> out(span, Rat(0));
    for (const auto& [v, q] : m) out[v] = q;
    return out;
}

std::vector<Rat> to_point_int(const std::map<VarId, Int>& m,
                              std::size_t span) {
    std::vector<Rat> out(span, Rat(0));
    for (const auto& [v, q] : m) out[v] = Rat(q);
    return out;
}

Rat random_rational(std::uint64_t& state, long num_bound,
                    unsigned long den_bound) {
    long n = static_cast<long>(splitmix64(state) % (2 * num_bound + 1)) -
             num_bound;
    unsigned long d = splitmix64(state) % den_bound + 1;
    return make_rational(Int(n), Int(d));
}

// Integer polynomial vanishing at the given rational point: a random
// combination of the linear factors (den_i * X_i - num_i).
Polynomial planted_polynomial(std::uint64_t& state,
                              const std::vector<Rat>& point) {
    Polynomial f;
    for (std::size_t i = 0; i < point.size(); ++i) {
        Polynomial factor = Polynomial(rat_den(point[i])) * X(i) -
                            Polynomial(rat_num(point[i]));
        long c = static_cast<long>(splitmix64(state) % 9) - 4;
        Polynomial weight(Int(c == 0 ? 1 : c));
        if (splitmix64(state) % 3 == 0)
            weight = weight * X(splitmix64(state) % point.size());
        f += weight * factor;
    }
    if (f.is_zero()) f = Polynomial(rat_den(point[0])) * X(0) -
                         Polynomial(rat_num(point[0]));
    return f;
}

}  // namespace

TEST_CASE("four_squares frozen examples", "[reductions]") {
    CHECK(four_squares(Int(0)) == std::array<Int, 4>{0, 0, 0, 0});
    CHECK(four_squares(Int(1)) == std::array<Int, 4>{1, 0, 0, 0});
    CHECK(four_squares(Int(7)) == std::array<Int, 4>{2, 1, 1, 1});
    CHECK_THROWS_AS(four_squares(Int(-1)), domain_error);
}

TEST_CASE("four_squares identity up to 10^4", "[reductions]") {
    for (long n = 0; n <= 10000; ++n) {
        std::array<Int, 4> s = four_squares(Int(n));
        Int sum(0);
        for (const Int& v : s) {
            REQUIRE(v >= 0);
            sum += v * v;
        }
        REQUIRE(sum == n);
    }
}

TEST_CASE("homogenization of 2x0 - 1", "[reductions]") {
    Polynomial f = parse_polynomial("2*x0 - 1");
    HomogenizationResult r = homogenize_with_positivity(f);
    REQUIRE(r.y == 1);
    REQUIRE(r.d == 5);

    Polynomial core = Polynomial(Int(2)) * X(0) - X(1);
    Polynomial pos = X(1) - Polynomial(Int(1)) - X(2) * X(2) - X(3) * X(3) -
                     X(4) * X(4) - X(5) * X(5);
    CHECK(r.reduced == core * core + pos * pos);

    std::map<VarId, Rat> zero{{0, make_rational(Int(1), Int(2))}};
    std::map<VarId, Int> witness = r.forward_witness(zero);
    CHECK(witness.at(0) == 1);
    CHECK(witness.at(r.y) == 2);
    CHECK(witness.at(r.a) == 1);
    CHECK(witness.at(r.b) == 0);
    CHECK(witness.at(r.c) == 0);
    CHECK(witness.at(r.d) == 0);
    CHECK(r.reduced.evaluate(to_point_int(witness, 6)) == 0);
}

TEST_CASE("homogenization of x0^2 + 1 is unsolvable", "[reductions]") {
    Polynomial f = parse_polynomial("x0^2 + 1");
    HomogenizationResult r = homogenize_with_positivity(f);

    Polynomial core = X(0) * X(0) + X(1) * X(1);
    Polynomial pos = X(1) - Polynomial(Int(1)) - X(2) * X(2) - X(3) * X(3) -
                     X(4) * X(4) - X(5) * X(5);
    CHECK(r.reduced == core * core + pos * pos);

    SearchLimits limits;
    SearchOutcome over_z =
        search(r.reduced, SubringDescriptor::integers(), 3, limits);
    CHECK_FALSE(over_z.found());
    SearchOutcome over_half =
        search(r.reduced, parse_descriptor("include:2"), 2, limits);
    CHECK_FALSE(over_half.found());
}

TEST_CASE("homogenization of x0", "[reductions]") {
    HomogenizationResult r =
        homogenize_with_positivity(parse_polynomial("x0"));
    std::map<VarId, Rat> zero{{0, Rat(0)}};
    std::map<VarId, Int> witness = r.forward_witness(zero);
    CHECK(witness.at(0) == 0);
    CHECK(witness.at(r.y) == 1);
    CHECK(witness.at(r.a) == 0);
    CHECK(r.reduced.evaluate(to_point_int(witness, 6)) == 0);
    CHECK_THROWS_AS(homogenize_with_positivity(Polynomial()), domain_error);
}

TEST_CASE("homogenization round trip on planted zeros", "[reductions]") {
    std::uint64_t state = 20260814;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t nvars = 1 + splitmix64(state) % 3;
        std::vector<Rat> point;
        for (std::size_t i = 0; i < nvars; ++i)
            point.push_back(random_rational(state, 5, 6));
        Polynomial f = planted_polynomial(state, point);
        REQUIRE(f.evaluate(point) == 0);

        HomogenizationResult r = homogenize_with_positivity(f);
        std::map<VarId, Rat> zero;
        for (std::size_t i = 0; i < nvars; ++i) zero[i] = point[i];
        std::map<VarId, Int> fw = r.forward_witness(zero);
        REQUIRE(r.reduced.evaluate(to_point_int(fw, r.d + 1)) == 0);

        std::map<VarId, Rat> fw_rat;
        for (const auto& [v, q] : fw) fw_rat[v] = Rat(q);
        std::map<VarId, Rat> back = r.backward_witness(fw_rat);
        std::vector<Rat> back_point(nvars, Rat(0));
        for (const auto& [v, q] : back) back_point[v] = q;
        REQUIRE(f.evaluate(back_point) == 0);
    }
}

TEST_CASE("backward map applied to a solver-found zero", "[reductions]") {
    Polynomial f = parse_polynomial("2*x0 - 1");
    HomogenizationResult r = homogenize_with_positivity(f);
    SearchOutcome out =
        search(r.reduced, SubringDescriptor::integers(), 2, SearchLimits{});
    REQUIRE(out.found());
    std::map<VarId, Rat> back = r.backward_witness(out.witness->assignment);
    CHECK(back.at(0) == make_rational(Int(1), Int(2)));
    CHECK(f.evaluate({back.at(0)}) == 0);
}

TEST_CASE("conjoin worked examples", "[reductions]") {
    Polynomial a = parse_polynomial("x0 - 2");
    CHECK(conjoin({a}) == a * a);
    CHECK(conjoin({a}).evaluate({Rat(2)}) == 0);

    Polynomial b = parse_polynomial("x1 - x0");
    Polynomial pair = conjoin({a, b});
    CHECK(pair == a * a + b * b);
    CHECK(pair.evaluate({Rat(2), Rat(2)}) == 0);
    std::vector<SolutionWitness> all = find_all(
        pair, SubringDescriptor::integers(), 3, SearchLimits{});
    REQUIRE(all.size() == 1);
    CHECK(all[0].assignment.at(0) == 2);
    CHECK(all[0].assignment.at(1) == 2);

    Polynomial clash =
        conjoin({parse_polynomial("x0 - 1"), parse_polynomial("x0 + 1")});
    CHECK(clash == parse_polynomial("2*x0^2 + 2"));
    CHECK_FALSE(search(clash, parse_descriptor("include:2,3"), 6,
                       SearchLimits{})
                    .found());

    CHECK_THROWS_AS(conjoin({}), domain_error);
}

TEST_CASE("conjunction agrees with simultaneous solving", "[reductions]") {
    std::uint64_t state = 977;
    SubringDescriptor ring = parse_descriptor("include:2");
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t nvars = 1 + splitmix64(state) % 2;
        std::vector<Rat> point;
        for (std::size_t i = 0; i < nvars; ++i)
            point.push_back(random_rational(state, 2, 2));
        std::size_t k = 2 + splitmix64(state) % 3;
        std::vector<Polynomial> gs;
        for (std::size_t i = 0; i < k; ++i)
            gs.push_back(planted_polynomial(state, point));

        unsigned long h = 3;
        SearchOutcome joint = search(conjoin(gs), ring, h, SearchLimits{});
        SearchOutcome system = search_system(gs, ring, h, SearchLimits{});
        REQUIRE(joint.found() == system.found());
        REQUIRE(joint.found());
        for (const Polynomial& g : gs) {
            std::vector<Rat> at =
                to_point(joint.witness->assignment, g.variable_span());
            REQUIRE(g.evaluate(at) == 0);
        }
    }
    std::vector<Polynomial> incompatible{parse_polynomial("x0 - 1"),
                                         parse_polynomial("x0 - 2")};
    CHECK_FALSE(search(conjoin(incompatible), ring, 4, SearchLimits{})
                    .found());
    CHECK_FALSE(search_system(incompatible, ring, 4, SearchLimits{})
                    .found());
}

TEST_CASE("gadget registry validation", "[reductions]") {
    GadgetRegistry reg;
    CHECK(reg.size() == 0);
    CHECK_THROWS_AS(
        reg.add(GadgetEntry{Int(4), mock_gadget_polynomial(),
                            std::string(kMockSemanticsTag)}),
        domain_error);
    CHECK_THROWS_AS(
        reg.add(GadgetEntry{Int(5), parse_polynomial("x0 + x1"),
                            std::string(kMockSemanticsTag)}),
        domain_error);
    reg.add(GadgetEntry{Int(5), mock_gadget_polynomial(),
                        std::string(kMockSemanticsTag)});
    CHECK_THROWS_AS(
        reg.add(GadgetEntry{Int(5), mock_gadget_polynomial(),
                            std::string(kMockSemanticsTag)}),
        domain_error);
    CHECK(reg.size() == 1);
    REQUIRE(reg.find(Int(5)) != nullptr);
    CHECK(reg.find(Int(5))->is_mock());
    CHECK(reg.find(Int(7)) == nullptr);
    CHECK(reg.has_mock());
}

TEST_CASE("semilocal combiner with empty exclusion set", "[reductions]") {
    Polynomial g = parse_polynomial("x0^2 - 2");
    SemilocalResult r = semilocal_reduce(g, {}, GadgetRegistry{});
    CHECK(r.reduced == g * g);
    CHECK(r.instances.empty());
    CHECK_FALSE(r.uses_mock);
}

TEST_CASE("semilocal combiner structure", "[reductions]") {
    Polynomial g = parse_polynomial("x0 + x2^2");
    GadgetRegistry reg = GadgetRegistry::with_mocks({Int(3), Int(5)});
    SemilocalResult r = semilocal_reduce(g, {Int(3), Int(5)}, reg);
    CHECK(r.uses_mock);
    REQUIRE(r.instances.size() == 6);

    std::set<VarId> fresh_seen;
    VarId expected_next = 3;
    std::vector<std::pair<Int, VarId>> expected_slots{
        {3, 0}, {3, 1}, {3, 2}, {5, 0}, {5, 1}, {5, 2}};
    for (std::size_t i = 0; i < r.instances.size(); ++i) {
        const GadgetInstance& inst = r.instances[i];
        CHECK(inst.prime == expected_slots[i].first);
        CHECK(inst.variable == expected_slots[i].second);
        for (VarId v : inst.fresh) {
            CHECK(v == expected_next);
            ++expected_next;
            CHECK(fresh_seen.insert(v).second);
        }
    }
    CHECK(expected_next == 3 + 18);

    Polynomial expected = g * g;
    for (const GadgetInstance& inst : r.instances) {
        Polynomial instance = mock_gadget_polynomial().rename(
            {{0, inst.variable},
             {1, inst.fresh[0]},
             {2, inst.fresh[1]},
             {3, inst.fresh[2]}});
        expected += instance * instance;
    }
    CHECK(r.reduced == expected);

    CHECK_THROWS_AS(semilocal_reduce(g, {Int(7)}, reg), domain_error);
    CHECK_THROWS_AS(semilocal_reduce(Polynomial(), {}, reg), domain_error);
}

TEST_CASE("mock gadget semantics match the valuation oracle",
          "[reductions]") {
    // g = x0 - 1 over A0 = {5}: a Q-solution of the combined polynomial
    // sets x0 = 1, and v_5(1) >= 0, so the declared semantics admit it.
    CHECK(mock_gadget_admits(Rat(1), Int(5)));
    CHECK(padic_valuation(Rat(1), Int(5)).value >= 0);
    CHECK(mock_semantics_admits({{0, Rat(1)}}, {Int(5)}));

    // g = 5x0 - 1 forces x0 = 1/5 with v_5 < 0: inadmissible.
    Rat fifth = make_rational(Int(1), Int(5));
    CHECK_FALSE(mock_gadget_admits(fifth, Int(5)));
    CHECK(padic_valuation(fifth, Int(5)).value < 0);
    CHECK_FALSE(mock_semantics_admits({{0, fifth}}, {Int(5)}));
    CHECK(mock_semantics_admits({{0, make_rational(Int(1), Int(3))}},
                                {Int(5)}));

    // The same split seen by the honest solver over R_{P - {5}}.
    SubringDescriptor ring = parse_descriptor("exclude:5");
    CHECK(search(parse_polynomial("x0 - 1"), ring, 2, SearchLimits{})
              .found());
    CHECK_FALSE(
        search(parse_polynomial("5*x0 - 1"), ring, 10, SearchLimits{})
            .found());
}
