#include "doctest.h"

#include "credo/credal.hpp"
#include "credo/errors.hpp"
#include "credo/scenario.hpp"
#include "oracles.hpp"

using namespace credo;
using numerics::LinearConstraints;

namespace {

CredalSet builtin(const std::string& name) { return builtin_scenario(name).credal(); }

LinearConstraints as_constraints(const Scenario& s) {
    LinearConstraints c(s.space.nx() * s.space.ny());
    for (const auto& row : *s.constraints) {
        if (row.relation == ConstraintRow::Relation::eq)
            c.add_eq(row.coeffs, row.rhs);
        else
            c.add_le(row.coeffs, row.rhs);
    }
    return c;
}

// Random credal set whose vertices all give every x positive mass.
CredalSet random_credal(oracle::Rng& rng, std::size_t nx, std::size_t ny) {
    return rng.credal(nx, ny, 1 + rng.index(4), 0.01);
}

}  // namespace

TEST_SUITE("construction") {

TEST_CASE("fixed Y-marginal set") {
    const auto s = builtin_scenario("example_2_1");
    const auto p = s.credal();
    const auto c = as_constraints(s);
    CHECK(oracle::same_point_sets(p.points(), oracle::vertices_by_subsets(4, c.eq_rows, c.eq_rhs, c.le_rows, c.le_rhs)));
    CHECK(p.size() == 4);
    for (const auto& v : p.points()) CHECK(v[1] + v[3] == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("three doors") {
    const auto s = builtin_scenario("monty_hall");
    const auto p = s.credal();
    const auto c = as_constraints(s);
    CHECK(oracle::same_point_sets(p.points(), oracle::vertices_by_subsets(6, c.eq_rows, c.eq_rhs, c.le_rows, c.le_rhs)));
    for (const auto& v : p.points()) {
        for (std::size_t y = 0; y < 3; ++y) CHECK(v[y] + v[3 + y] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(std::abs(v[1]) <= 1e-12);
        CHECK(std::abs(v[5]) <= 1e-12);
    }
}

TEST_CASE("pinned weights give one vertex") {
    SpaceSpec space{{"a", "b"}, {"0", "1"}, {"0"}};
    LinearConstraints c(4);
    c.add_eq({1, 0, 0, 0}, 0.1);
    c.add_eq({0, 1, 0, 0}, 0.2);
    c.add_eq({0, 0, 1, 0}, 0.3);
    const auto p = CredalSet::from_constraints(space, c);
    REQUIRE(p.size() == 1);
    CHECK(p.points()[0][3] == doctest::Approx(0.4));
    CHECK(p.origin().has_value());
}

TEST_CASE("empty and oversized constraint sets") {
    SpaceSpec space{{"a", "b"}, {"0", "1"}, {"0"}};
    LinearConstraints c(4);
    c.add_eq({1, 1, 0, 0}, 0.7);
    c.add_eq({1, 0, 1, 0}, 0.1);
    c.add_eq({0, 1, 0, 0}, 0.8);
    CHECK_THROWS_AS(CredalSet::from_constraints(space, c), EmptySetError);

    SpaceSpec big{{"a", "b", "c", "d", "e"}, {"0", "1", "2", "3"}, {"0"}};
    CHECK_THROWS_AS(CredalSet::from_constraints(big, LinearConstraints(20)), SizeLimitError);
}

TEST_CASE("redundant points are dropped") {
    const std::vector<JointDist> pts = {JointDist::point_mass(1, 2, 0, 0), JointDist::point_mass(1, 2, 0, 1),
                                        JointDist::uniform(1, 2)};
    const auto p = CredalSet::from_vertices(1, 2, pts);
    CHECK(p.size() == 2);
    CHECK(p.contains(JointDist::uniform(1, 2)));
}

}  // TEST_SUITE

TEST_SUITE("conditioning") {

TEST_CASE("coin conditioned on heads") {
    const auto p = builtin("walley_coin");
    const auto c = credal_condition(p, Event::observation(2, 2, 0));
    const auto y = credal_marginal_y(c);
    CHECK(equal(y, DistributionSet::simplex(2)));
}

TEST_CASE("singleton set") {
    const JointDist j(2, 2, {0.1, 0.2, 0.3, 0.4});
    const auto c = credal_condition(CredalSet::singleton(j), Event::observation(2, 2, 1));
    REQUIRE(c.size() == 1);
    CHECK(c.points()[0][2] == doctest::Approx(3.0 / 7));
    CHECK(c.points()[0][3] == doctest::Approx(4.0 / 7));
}

TEST_CASE("fixed Y-marginal set given X=0") {
    const auto p = builtin("example_2_1");
    const auto y = credal_marginal_y(credal_condition(p, Event::observation(2, 2, 0)));
    CHECK(equal(y, DistributionSet::simplex(2)));
}

TEST_CASE("vertices that kill the event") {
    const auto p = builtin("example_2_1");
    const auto e = Event::observation(2, 2, 0);
    CHECK(conditioning_drops_vertices(p, e));
    CHECK(can_condition(p, e));
    const auto never = CredalSet::singleton(JointDist::point_mass(2, 2, 0, 0));
    CHECK_FALSE(can_condition(never, Event::observation(2, 2, 1)));
    CHECK_THROWS_AS(credal_condition(never, Event::observation(2, 2, 1)), EmptySetError);
}

TEST_CASE("agrees with pointwise conditioning") {
    oracle::Rng rng(7);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t nx = 2 + rng.index(2), ny = 2 + rng.index(2);
        const auto p = rng.credal(nx, ny, 2 + rng.index(3));
        std::vector<bool> mask(nx * ny);
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = rng.uniform() < 0.5;
        mask[rng.index(mask.size())] = true;
        const Event e(nx, ny, mask);
        const auto pe = credal_condition(p, e);
        for (int k = 0; k < 5; ++k) {
            const JointDist pr(nx, ny, oracle::mixture(p, rng.dirichlet(p.size())));
            if (probability(pr, e) <= 1e-6) continue;
            CHECK(pe.contains(condition(pr, e)));
            ++checked;
        }
    }
    CHECK(checked > 200);
}

}  // TEST_SUITE

TEST_SUITE("marginal sets") {

TEST_CASE("single Y-marginal") {
    const auto y = credal_marginal_y(builtin("example_2_1"));
    REQUIRE(y.is_point());
    CHECK(y.vertices()[0][0] == doctest::Approx(1.0 / 3));
    CHECK(y.vertices()[0][1] == doctest::Approx(2.0 / 3));

    const auto doors = credal_marginal_y(builtin("monty_hall"));
    REQUIRE(doors.is_point());
    for (double w : doors.vertices()[0]) CHECK(w == doctest::Approx(1.0 / 3));
}

TEST_CASE("projection of the simplex") {
    CHECK(equal(credal_marginal_y(CredalSet::simplex(3, 2)), DistributionSet::simplex(2)));
    CHECK(equal(credal_marginal_x(CredalSet::simplex(3, 2)), DistributionSet::simplex(3)));
}

TEST_CASE("mixtures stay inside") {
    oracle::Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 1 + rng.index(3);
        const auto p = rng.credal(nx, ny, 1 + rng.index(4));
        const JointDist m(nx, ny, oracle::mixture(p, rng.dirichlet(p.size())));
        CHECK(credal_marginal_y(p).contains(marginal_y(m)));
        CHECK(credal_marginal_x(p).contains(marginal_x(m)));
    }
}

}  // TEST_SUITE

TEST_SUITE("hull") {

TEST_CASE("fixed Y-marginal set fills the simplex") {
    const auto p = builtin("example_2_1");
    const auto h = build_hull(p);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
            const auto corner = JointDist::point_mass(2, 2, x, y);
            CHECK(numerics::polytope_contains(h.points(), corner.weights()));
            // A corner has Y-marginal 0 or 1, never 2/3.
            CHECK_FALSE(numerics::polytope_contains(p.points(), corner.weights()));
        }
    }
    CHECK(credal_subset(p, h));
    CHECK_FALSE(credal_equal(p, h));
}

TEST_CASE("singleton with full support") {
    const auto p = CredalSet::singleton(JointDist(2, 2, {0.1, 0.2, 0.3, 0.4}));
    CHECK(credal_equal(build_hull(p), p));
}

TEST_CASE("marginal polytope with fixed conditionals") {
    oracle::Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        const std::size_t nx = 2 + rng.index(2), ny = 2 + rng.index(2);
        std::vector<oracle::Vec> cond, marg;
        for (std::size_t x = 0; x < nx; ++x) cond.push_back(rng.dirichlet(ny));
        for (std::size_t k = 0, n = 1 + rng.index(3); k < n; ++k) marg.push_back(rng.dirichlet(nx));
        const auto p = oracle::product_family(marg, cond);
        const auto h = build_hull(p);
        for (const auto& v : h.points()) CHECK(numerics::polytope_contains(p.points(), v));
        for (const auto& v : p.points()) CHECK(numerics::polytope_contains(h.points(), v));
        CHECK(credal_equal(p, h));
    }
}

TEST_CASE("contains P and is idempotent") {
    oracle::Rng rng(10);
    for (int t = 0; t < 30; ++t) {
        const std::size_t nx = 2, ny = 2 + rng.index(2);
        const auto p = random_credal(rng, nx, ny);
        const auto h = build_hull(p);
        CHECK(credal_subset(p, h, 1e-8));
        CHECK(credal_equal(build_hull(h), h));
    }
}

TEST_CASE("empty cells add no constraint") {
    // X = 1 never happens, so the hull is just the marginal-times-conditional
    // family over X = 0.
    const std::vector<JointDist> pts = {JointDist(2, 2, {0.3, 0.7, 0.0, 0.0}), JointDist(2, 2, {0.6, 0.4, 0.0, 0.0})};
    const auto p = CredalSet::from_vertices(2, 2, pts);
    CHECK(credal_equal(build_hull(p), p));
}

}  // TEST_SUITE

TEST_SUITE("equality") {

TEST_CASE("identity and redundant lists") {
    const auto p = builtin("monty_hall");
    CHECK(credal_equal(p, p));
    const auto seg = CredalSet::from_extreme_points(1, 2, {{1.0, 0.0}, {0.0, 1.0}});
    const auto padded = CredalSet::from_vertices(
        1, 2, {JointDist(1, 2, {1.0, 0.0}), JointDist(1, 2, {0.5, 0.5}), JointDist(1, 2, {0.0, 1.0})});
    CHECK(credal_equal(seg, padded));
    const auto half = CredalSet::from_extreme_points(1, 2, {{1.0, 0.0}, {0.5, 0.5}});
    CHECK(credal_subset(half, seg));
    CHECK_FALSE(credal_subset(seg, half));
}

}  // TEST_SUITE

TEST_SUITE("dilation") {

TEST_CASE("coin") {
    const auto r = detect_dilation(builtin("walley_coin"));
    REQUIRE(r.entries.size() == 2);
    CHECK(r.prior_y.is_point());
    for (const auto& e : r.entries) {
        CHECK(e.defined);
        CHECK(e.dilation);
        CHECK(equal(e.conditional_y, DistributionSet::simplex(2)));
    }
    CHECK(r.any());
}

TEST_CASE("singleton never dilates") {
    const auto r = detect_dilation(CredalSet::singleton(JointDist(2, 2, {0.1, 0.2, 0.3, 0.4})));
    for (const auto& e : r.entries) {
        CHECK(e.defined);
        CHECK_FALSE(e.dilation);
    }
    CHECK_FALSE(r.any());
}

TEST_CASE("fixed Y-marginal set dilates at both x") {
    const auto r = detect_dilation(builtin("example_2_1"));
    for (const auto& e : r.entries) CHECK(e.dilation);
}

TEST_CASE("undefined cells") {
    const auto r = detect_dilation(CredalSet::singleton(JointDist::point_mass(2, 2, 0, 1)));
    CHECK(r.entries[0].defined);
    CHECK_FALSE(r.entries[1].defined);
    CHECK_FALSE(r.entries[1].dilation);
}

}  // TEST_SUITE
