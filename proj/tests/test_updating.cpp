#include "doctest.h"

#include "credo/decision.hpp"
#include "credo/errors.hpp"
#include "credo/scenario.hpp"
#include "credo/updating.hpp"
#include "oracles.hpp"

using namespace credo;

namespace {

CredalSet builtin(const std::string& name) { return builtin_scenario(name).credal(); }

bool entries_subset(const UpdateRuleTable& a, const UpdateRuleTable& b) {
    for (std::size_t x = 0; x < a.nx; ++x)
        for (const auto& v : a.entries[x]->points())
            if (!numerics::polytope_contains(b.entries[x]->points(), v)) return false;
    return true;
}

// Narrowness from explicit vertex-membership tests.
Narrowness oracle_narrowness(const UpdateRuleTable& a, const UpdateRuleTable& b) {
    const bool ab = entries_subset(a, b), ba = entries_subset(b, a);
    if (ab && ba) return Narrowness::equal;
    if (ab) return Narrowness::narrower;
    if (ba) return Narrowness::wider;
    return Narrowness::incomparable;
}

bool at_most(Narrowness n) { return n == Narrowness::narrower || n == Narrowness::equal; }

}  // namespace

TEST_SUITE("partitions") {

TEST_CASE("Bell numbers") {
    const std::size_t bell[] = {1, 2, 5, 15, 52, 203};
    for (std::size_t n = 1; n <= 6; ++n) CHECK(all_partitions(n).size() == bell[n - 1]);
    CHECK_THROWS_AS(all_partitions(7), SizeLimitError);
    const auto two = all_partitions(2);
    CHECK(two[0] == Partition::whole(2));
    CHECK(two[1] == Partition::singletons(2));
}

TEST_CASE("canonical form and validation") {
    const Partition p(4, {{3, 1}, {2}, {0}});
    CHECK(p.cells()[0] == std::vector<std::size_t>{0});
    CHECK(p.cells()[1] == std::vector<std::size_t>{1, 3});
    CHECK(p.cell_of(3) == std::vector<std::size_t>{1, 3});
    CHECK(p.cell_index(2) == 2);
    CHECK(p.format({"a", "b", "c", "d"}) == "a;b,d;c");
    CHECK_THROWS_AS(Partition(3, {{0, 1}}), ValidationError);
    CHECK_THROWS_AS(Partition(3, {{0, 1}, {1, 2}}), ValidationError);
    CHECK_THROWS_AS(Partition(3, {{0, 1, 2}, {}}), ValidationError);
    CHECK_THROWS_AS(Partition(3, {{0, 1, 5}}), ValidationError);
}

}  // TEST_SUITE

TEST_SUITE("C-conditioning") {

TEST_CASE("singleton cells are ordinary conditioning") {
    oracle::Rng rng(1);
    const auto p = rng.credal(3, 2, 3);
    const auto t = c_conditioning(p, Partition::singletons(3));
    CHECK(t.provenance == Provenance::c_conditioning);
    for (std::size_t x = 0; x < 3; ++x)
        CHECK(credal_equal(*t.entries[x], credal_condition(p, Event::observation(3, 2, x))));
}

TEST_CASE("one cell returns P") {
    const auto p = builtin("monty_hall");
    const auto t = c_conditioning(p, Partition::whole(2));
    for (const auto& e : t.entries) CHECK(credal_equal(*e, p));
}

TEST_CASE("fixed Y-marginal set with singleton cells") {
    const auto t = c_conditioning(builtin("example_2_1"), Partition::singletons(2));
    for (const auto& e : t.entries) CHECK(equal(credal_marginal_y(*e), DistributionSet::simplex(2)));
}

TEST_CASE("cells nobody can reach are undefined") {
    const auto p = CredalSet::singleton(JointDist(3, 2, {0.2, 0.3, 0.1, 0.4, 0.0, 0.0}));
    const auto t = c_conditioning(p, Partition::singletons(3));
    CHECK(t.defined(0));
    CHECK_FALSE(t.defined(2));
    const auto rep = check_calibration(p, t);
    CHECK(rep.undefined == std::vector<std::size_t>{2});
    CHECK(rep.calibrated());
    const auto rule = rule_from_update(t, LossFn::zero_one(2));
    CHECK(rule(2, 0) == doctest::Approx(0.5));
}

}  // TEST_SUITE

TEST_SUITE("rules from updates") {

TEST_CASE("one cell on the fixed Y-marginal set predicts 1") {
    const auto r = rule_from_update(c_conditioning(builtin("example_2_1"), Partition::whole(2)), LossFn::zero_one(2));
    CHECK(r.ignores_information());
    CHECK(r(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("singleton cells on the fixed Y-marginal set randomize") {
    const auto r =
        rule_from_update(c_conditioning(builtin("example_2_1"), Partition::singletons(2)), LossFn::zero_one(2));
    for (std::size_t x = 0; x < 2; ++x) CHECK(r(x, 0) == doctest::Approx(0.5));
}

TEST_CASE("neither partition switches doors") {
    const auto s = builtin_scenario("monty_hall");
    const auto p = s.credal();
    const double best = apriori_minimax(p, s.loss).value;
    CHECK(best == doctest::Approx(1.0 / 3));
    for (const auto& c : all_partitions(2)) {
        const auto r = rule_from_update(c_conditioning(p, c), s.loss);
        CHECK(worst_case_loss(p, r, s.loss) > best + 0.1);
        CHECK_FALSE(r(0, 2) == doctest::Approx(1.0));
    }
}

TEST_CASE("singleton cells reproduce the a posteriori values") {
    oracle::Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 2 + rng.index(2), na = 2 + rng.index(2);
        const auto p = rng.credal(nx, ny, 1 + rng.index(4));
        const auto l = rng.loss(ny, na);
        const auto table = c_conditioning(p, Partition::singletons(nx));
        const auto r = rule_from_update(table, l);
        const auto post = aposteriori_minimax(p, l);
        for (std::size_t x = 0; x < nx; ++x) {
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& v : table.entries[x]->points()) {
                double s = 0.0;
                for (std::size_t y = 0; y < ny; ++y)
                    for (std::size_t a = 0; a < na; ++a) s += v[x * ny + y] * r(x, a) * l(y, a);
                worst = std::max(worst, s);
            }
            CHECK(std::abs(worst - *post.per_x_values[x]) <= 1e-7);
        }
    }
}

}  // TEST_SUITE

TEST_SUITE("calibration") {

TEST_CASE("C-conditioning is always calibrated") {
    oracle::Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t nx = 1 + rng.index(4), ny = 2 + rng.index(2);
        const auto p = rng.credal(nx, ny, 1 + rng.index(4));
        const auto parts = all_partitions(nx);
        const auto& c = parts[rng.index(parts.size())];
        const auto rep = check_calibration(p, c_conditioning(p, c));
        CHECK(rep.calibrated());
        // X_R cells partition the observations.
        std::vector<int> seen(nx, 0);
        for (const auto& k : rep.classes)
            for (auto x : k.cells) ++seen[x];
        for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("vacuous rule") {
    const auto p = builtin("monty_hall");
    const auto t = UpdateRuleTable::external(2, 3, {CredalSet::simplex(2, 3), CredalSet::simplex(2, 3)});
    const auto rep = check_calibration(p, t);
    CHECK(rep.calibrated());
    REQUIRE(rep.classes.size() == 1);
    CHECK(rep.classes[0].cells.size() == 2);
}

TEST_CASE("wrong point mass") {
    const JointDist j(2, 2, {0.1, 0.4, 0.3, 0.2});
    const auto p = CredalSet::singleton(j);
    // Claims Y = 1 for sure after X = 0, and Y = 0 for sure after X = 1.
    const auto t = UpdateRuleTable::external(2, 2,
                                             {CredalSet::singleton(JointDist::point_mass(2, 2, 0, 1)),
                                              CredalSet::singleton(JointDist::point_mass(2, 2, 1, 0))});
    const auto rep = check_calibration(p, t);
    CHECK_FALSE(rep.calibrated());
    REQUIRE(rep.violations.size() == 2);
    // Direct conditional marginals: (0.2, 0.8) and (0.6, 0.4), both off the claimed points.
    const auto c0 = marginal_y(condition(j, Event::observation(2, 2, 0)));
    const auto c1 = marginal_y(condition(j, Event::observation(2, 2, 1)));
    CHECK(c0[1] == doctest::Approx(0.8));
    CHECK(c1[0] == doctest::Approx(0.6));
    for (const auto& v : rep.violations) CHECK(v.residual > 1e-6);
}

TEST_CASE("classes pool observations with the same announcement") {
    const auto p = builtin("example_2_1");
    const auto t = c_conditioning(p, Partition::whole(2));
    const auto rep = check_calibration(p, t);
    REQUIRE(rep.classes.size() == 1);
    CHECK(rep.classes[0].cells == std::vector<std::size_t>{0, 1});
    CHECK(rep.calibrated());
}

}  // TEST_SUITE

TEST_SUITE("narrowness") {

TEST_CASE("identity and the vacuous table") {
    const auto p = builtin("example_2_1");
    const auto t = c_conditioning(p, Partition::singletons(2));
    CHECK(compare_narrowness(t, t) == Narrowness::equal);
    const auto vac = UpdateRuleTable::external(2, 2, {CredalSet::simplex(2, 2), CredalSet::simplex(2, 2)});
    CHECK(compare_narrowness(t, vac) == Narrowness::narrower);
    CHECK(compare_narrowness(vac, t) == Narrowness::wider);
}

TEST_CASE("fixed Y-marginal set: singleton cells against one cell") {
    const auto p = builtin("example_2_1");
    const auto s = c_conditioning(p, Partition::singletons(2));
    const auto w = c_conditioning(p, Partition::whole(2));
    CHECK(oracle_narrowness(s, w) == Narrowness::incomparable);
    CHECK(compare_narrowness(s, w) == Narrowness::incomparable);
}

TEST_CASE("different defined observations") {
    const auto p = CredalSet::singleton(JointDist(2, 2, {0.5, 0.5, 0.0, 0.0}));
    const auto a = c_conditioning(p, Partition::singletons(2));
    const auto b = c_conditioning(p, Partition::whole(2));
    CHECK(compare_narrowness(a, b) == Narrowness::incomparable);
}

}  // TEST_SUITE

TEST_SUITE("sharp search") {

TEST_CASE("one observation") {
    const auto r = sharp_search(CredalSet::singleton(JointDist(1, 2, {0.3, 0.7})));
    CHECK(r.candidates.size() == 1);
    CHECK(r.minimal == std::vector<std::size_t>{0});
}

TEST_CASE("fixed Y-marginal set keeps both partitions") {
    const auto r = sharp_search(builtin("example_2_1"));
    CHECK(r.candidates.size() == 2);
    CHECK(r.minimal.size() == 2);
    CHECK(r.relation[0][1] == Narrowness::incomparable);
}

TEST_CASE("single full-support distribution") {
    oracle::Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const std::size_t nx = 2 + rng.index(2);
        const auto p = CredalSet::singleton(JointDist(nx, 2, rng.joint(nx, 2, 0.01)));
        const auto r = sharp_search(p);
        const std::size_t n = r.candidates.size();
        std::vector<std::size_t> minimal;
        for (std::size_t i = 0; i < n; ++i) {
            bool beaten = false;
            for (std::size_t j = 0; j < n; ++j)
                if (oracle_narrowness(r.candidates[j].table, r.candidates[i].table) == Narrowness::narrower)
                    beaten = true;
            if (!beaten) minimal.push_back(i);
        }
        CHECK(r.minimal == minimal);
        bool has_singletons = false;
        for (auto i : r.minimal) has_singletons |= r.candidates[i].partition == Partition::singletons(nx);
        CHECK(has_singletons);
    }
}

TEST_CASE("the relation is a partial order and every candidate is calibrated") {
    oracle::Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const std::size_t nx = 3 + rng.index(2);
        const auto p = rng.credal(nx, 2, 1 + rng.index(3));
        const auto r = sharp_search(p);
        const std::size_t n = r.candidates.size();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(r.relation[i][i] == Narrowness::equal);
            for (std::size_t j = 0; j < n; ++j) {
                const auto ij = r.relation[i][j], ji = r.relation[j][i];
                CHECK((ij == Narrowness::narrower) == (ji == Narrowness::wider));
                CHECK((ij == Narrowness::equal) == (ji == Narrowness::equal));
                for (std::size_t k = 0; k < n; ++k)
                    if (at_most(ij) && at_most(r.relation[j][k])) CHECK(at_most(r.relation[i][k]));
            }
        }
        for (auto i : r.minimal) {
            CHECK(r.candidates[i].table.provenance == Provenance::c_conditioning);
            CHECK(std::string(to_string(r.candidates[i].table.provenance)) == "C-conditioning");
            CHECK(check_calibration(p, r.candidates[i].table).calibrated());
        }
    }
}

TEST_CASE("size limit") {
    CHECK_THROWS_AS(sharp_search(CredalSet::simplex(7, 1)), SizeLimitError);
}

}  // TEST_SUITE
