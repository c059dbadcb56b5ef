#include "doctest.h"

#include "credo/errors.hpp"
#include "credo/games.hpp"
#include "credo/scenario.hpp"
#include "oracles.hpp"

using namespace credo;

namespace {

CredalSet builtin(const std::string& name) { return builtin_scenario(name).credal(); }

// Bayes loss of a joint: best action per x.
double bayes_with_x(const JointDist& j, const LossFn& l) {
    double total = 0.0;
    for (std::size_t x = 0; x < j.nx(); ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < l.na(); ++a) {
            double s = 0.0;
            for (std::size_t y = 0; y < j.ny(); ++y) s += j(x, y) * l(y, a);
            best = std::min(best, s);
        }
        total += best;
    }
    return total;
}

// Bayes loss when the action may not depend on x.
double bayes_without_x(const JointDist& j, const LossFn& l) {
    const auto q = marginal_y(j);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < l.na(); ++a) {
        double s = 0.0;
        for (std::size_t y = 0; y < j.ny(); ++y) s += q[y] * l(y, a);
        best = std::min(best, s);
    }
    return best;
}

double worst_over(const std::vector<JointDist>& pts, const DecisionRule& r, const LossFn& l) {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) w = std::max(w, oracle::expected_loss(p.weights(), p.ny(), r, l));
    return w;
}

// Equilibrium properties checked from the outside.
void check_equilibrium(const CredalSet& p, const LossFn& l, const Equilibrium& eq, oracle::Rng& rng) {
    // Bookie side: no vertex beats the value.
    for (const auto& v : p.points()) CHECK(oracle::expected_loss(v, p.ny(), eq.agent, l) <= eq.value + 1e-6);
    // Support condition.
    for (std::size_t k = 0; k < eq.bookie.support.size(); ++k) {
        if (eq.bookie.weights[k] <= 1e-9) continue;
        const auto& s = eq.bookie.support[k];
        CHECK(oracle::expected_loss(s.weights(), s.ny(), eq.agent, l) >= eq.value - 1e-6);
    }
    // Agent side: single-row changes do not help against the support.
    const double base = worst_over(eq.bookie.support, eq.agent, l);
    for (std::size_t x = 0; x < p.nx(); ++x) {
        for (std::size_t a = 0; a < l.na(); ++a) {
            std::vector<double> row(l.na(), 0.0);
            row[a] = 1.0;
            CHECK(worst_over(eq.bookie.support, eq.agent.with_row(x, row), l) >= base - 1e-6);
        }
        for (int k = 0; k < 5; ++k)
            CHECK(worst_over(eq.bookie.support, eq.agent.with_row(x, rng.dirichlet(l.na())), l) >= base - 1e-6);
    }
    double wsum = 0.0;
    for (double w : eq.bookie.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0));
}

}  // namespace

TEST_SUITE("P-game") {

TEST_CASE("fixed Y-marginal set") {
    const auto p = builtin("example_2_1");
    const auto l = LossFn::zero_one(2);
    const auto g = solve_p_game(p, l);
    CHECK(g.equilibrium.value == doctest::Approx(1.0 / 3));
    CHECK(g.certificate.max_residual() <= 1e-6);
    // Under the aggregate, knowing X does not improve the best prediction.
    const auto& agg = g.equilibrium.aggregate;
    CHECK(p.contains(agg));
    CHECK(std::abs(bayes_with_x(agg, l) - bayes_without_x(agg, l)) <= 1e-9);
    CHECK(bayes_with_x(agg, l) == doctest::Approx(1.0 / 3));
    oracle::Rng rng(1);
    check_equilibrium(p, l, g.equilibrium, rng);
}

TEST_CASE("zero loss") {
    const auto p = builtin("monty_hall");
    const LossFn zero(3, 3, std::vector<double>(9, 0.0));
    const auto g = solve_p_game(p, zero);
    CHECK(g.equilibrium.value == 0.0);
    CHECK(g.certificate.max_residual() == 0.0);
    for (double c : g.certificate.chain) CHECK(c == 0.0);
}

TEST_CASE("random 2x2x2 instances against support enumeration") {
    oracle::Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        const auto p = rng.credal(2, 2, 1 + rng.index(4));
        const auto l = rng.loss(2, 2);
        const auto g = solve_p_game(p, l);
        const auto ref = oracle::matrix_game_value(oracle::rule_game(p, l));
        REQUIRE(ref.has_value());
        CHECK(std::abs(g.equilibrium.value - *ref) <= 1e-5);
        CHECK(g.certificate.passes(1e-6));
        // Minimax equals maximin.
        CHECK(std::abs(g.certificate.chain[2] - g.certificate.chain[3]) <= 1e-6);
        check_equilibrium(p, l, g.equilibrium, rng);
    }
}

TEST_CASE("larger random instances") {
    oracle::Rng rng(3);
    for (int t = 0; t < 40; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 2 + rng.index(3), na = 2 + rng.index(3);
        const auto p = rng.credal(nx, ny, 1 + rng.index(5));
        const auto l = rng.loss(ny, na);
        const auto g = solve_p_game(p, l);
        CHECK(g.certificate.passes(1e-6));
        CHECK(std::abs(g.equilibrium.value - apriori_minimax(p, l).value) <= 1e-9);
        check_equilibrium(p, l, g.equilibrium, rng);
    }
}

TEST_CASE("aggregate is the weighted support") {
    const auto p = builtin("monty_hall");
    const auto g = solve_p_game(p, builtin_scenario("monty_hall").loss);
    const auto& b = g.equilibrium.bookie;
    for (std::size_t i = 0; i < 6; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < b.support.size(); ++k) s += b.weights[k] * b.support[k].weights()[i];
        CHECK(std::abs(s - g.equilibrium.aggregate.weights()[i]) <= 1e-12);
    }
    for (std::size_t k = 0; k < b.support.size(); ++k)
        CHECK(b.support[k].weights() == p.points()[b.vertex_index[k]]);
}

}  // TEST_SUITE

TEST_SUITE("P-x-game") {

TEST_CASE("fixed Y-marginal set at x=0") {
    const auto g = solve_px_game(builtin("example_2_1"), LossFn::zero_one(2), 0);
    CHECK(g.equilibrium.value == doctest::Approx(0.5));
    CHECK(g.equilibrium.agent(0, 0) == doctest::Approx(0.5));
    CHECK(g.equilibrium.agent(0, 1) == doctest::Approx(0.5));
    CHECK(g.certificate.passes(1e-6));
}

TEST_CASE("single distribution") {
    oracle::Rng rng(4);
    for (int t = 0; t < 30; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 2 + rng.index(2), na = 2 + rng.index(2);
        const JointDist j(nx, ny, rng.joint(nx, ny, 0.01));
        const auto l = rng.loss(ny, na);
        const std::size_t x = rng.index(nx);
        const auto c = condition(j, Event::observation(nx, ny, x));
        const auto g = solve_px_game(CredalSet::singleton(j), l, x);
        CHECK(std::abs(g.equilibrium.value - bayes_with_x(c, l)) <= 1e-9);
    }
}

TEST_CASE("three doors after seeing G3") {
    const auto s = builtin_scenario("monty_hall");
    const auto p = s.credal();
    const auto g = solve_px_game(p, s.loss, 1);
    // Worst case of each pure action against the conditional vertices.
    const auto c = credal_condition(p, Event::observation(2, 3, 1));
    std::vector<double> worst(3, -1.0);
    for (const auto& v : c.points())
        for (std::size_t a = 0; a < 3; ++a) {
            double e = 0.0;
            for (std::size_t y = 0; y < 3; ++y) e += v[3 + y] * s.loss(y, a);
            worst[a] = std::max(worst[a], e);
        }
    CHECK(worst[1] == doctest::Approx(0.5));
    CHECK(worst[1] <= worst[0]);
    CHECK(worst[1] < worst[2]);
    CHECK(g.equilibrium.agent(1, 1) == doctest::Approx(1.0));
    CHECK(g.equilibrium.value == doctest::Approx(worst[1]));
    CHECK(g.certificate.passes(1e-6));
}

TEST_CASE("agrees with the a posteriori per-x values") {
    oracle::Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 2 + rng.index(2), na = 2 + rng.index(2);
        const auto p = rng.credal(nx, ny, 1 + rng.index(4));
        const auto l = rng.loss(ny, na);
        const auto post = aposteriori_minimax(p, l);
        for (std::size_t x = 0; x < nx; ++x) {
            const auto g = solve_px_game(p, l, x);
            CHECK(std::abs(g.equilibrium.value - *post.per_x_values[x]) <= 1e-7);
            CHECK(g.certificate.passes(1e-6));
            CHECK(std::abs(g.certificate.chain[2] - g.certificate.chain[3]) <= 1e-6);
        }
    }
}

TEST_CASE("empty conditional") {
    const auto p = CredalSet::singleton(JointDist::point_mass(2, 2, 0, 0));
    CHECK_THROWS_AS(solve_px_game(p, LossFn::zero_one(2), 1), EmptySetError);
}

}  // TEST_SUITE

TEST_SUITE("time inconsistency") {

TEST_CASE("fixed Y-marginal set") {
    const auto r = time_inconsistency_report(builtin("example_2_1"), LossFn::zero_one(2));
    CHECK(r.inconsistent());
    CHECK(r.rules_differ);
    CHECK(r.apriori.rule(0, 1) == doctest::Approx(1.0));
    CHECK(r.aposteriori.rule(0, 0) == doctest::Approx(0.5));
    for (const auto& d : r.row_distance) CHECK(*d == doctest::Approx(0.5));
    CHECK_FALSE(r.apriori_game.empty());
    CHECK_FALSE(r.aposteriori_game.empty());
}

TEST_CASE("single full-support distribution") {
    oracle::Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        const std::size_t nx = 1 + rng.index(3), ny = 2 + rng.index(2), na = 2 + rng.index(2);
        const auto p = CredalSet::singleton(JointDist(nx, ny, rng.joint(nx, ny, 0.01)));
        const auto r = time_inconsistency_report(p, rng.loss(ny, na));
        CHECK_FALSE(r.inconsistent());
    }
}

TEST_CASE("hull-closed sets with full support") {
    oracle::Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const std::size_t nx = 2, ny = 2 + rng.index(2), na = 2 + rng.index(2);
        std::vector<oracle::Vec> cond, marg;
        for (std::size_t x = 0; x < nx; ++x) cond.push_back(rng.dirichlet(ny));
        for (int k = 0; k < 3; ++k) marg.push_back(rng.joint(1, nx, 0.05));
        const auto p = oracle::product_family(marg, cond);
        const auto l = rng.loss(ny, na);
        const auto r = time_inconsistency_report(p, l);
        CHECK_FALSE(r.values_differ);
        // The a priori rule's rows already achieve the per-x values.
        for (std::size_t x = 0; x < nx; ++x)
            CHECK(std::abs(*r.apriori_conditional_values[x] - *r.aposteriori.per_x_values[x]) <= 1e-6);
    }
}

}  // TEST_SUITE
