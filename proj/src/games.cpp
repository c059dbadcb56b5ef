#include "credo/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "credo/errors.hpp"
#include "credo/numerics/lp.hpp"

namespace credo {

using numerics::LinearProgram;
using numerics::Vec;

namespace {

constexpr double kSupportWeight = 1e-9;

// c[j][x * na + a] = sum_y V_j(x, y) L(y, a)
std::vector<Vec> contributions(const CredalSet& p, const LossFn& loss) {
    const std::size_t na = loss.na();
    std::vector<Vec> c(p.size(), Vec(p.nx() * na, 0.0));
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t x = 0; x < p.nx(); ++x)
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t y = 0; y < p.ny(); ++y) c[j][x * na + a] += p.points()[j][x * p.ny() + y] * loss(y, a);
    return c;
}

double rule_loss(const Vec& cj, const DecisionRule& rule) {
    double s = 0.0;
    for (std::size_t i = 0; i < cj.size(); ++i) s += cj[i] * rule.table()[i];
    return s;
}

// max over the hull of min over rules of expected loss, as one LP over the
// mixture weights lambda and per-x best-response levels s_x.
double maximin_value(const std::vector<Vec>& c, std::size_t nx, std::size_t na) {
    const std::size_t nv = c.size();
    LinearProgram lp(nv + nx);
    Vec sum(nv + nx, 0.0);
    for (std::size_t j = 0; j < nv; ++j) sum[j] = 1.0;
    lp.add_eq(sum, 1.0);
    for (std::size_t x = 0; x < nx; ++x) {
        lp.objective[nv + x] = -1.0;
        for (std::size_t a = 0; a < na; ++a) {
            Vec row(nv + nx, 0.0);
            for (std::size_t j = 0; j < nv; ++j) row[j] = -c[j][x * na + a];
            row[nv + x] = 1.0;
            lp.add_le(row, 0.0);
        }
        lp.set_free(nv + x);
    }
    const auto sol = numerics::solve_lp(lp);
    if (!sol.optimal()) throw NumericalError("maximin program not solved to optimality");
    return -sol.objective;
}

// Certificate for the game in which the bookie mixes the vertices of p with
// `weights` and the agent plays `rule` (a rule over p's observations).
EquilibriumCertificate certify(const CredalSet& p, const LossFn& loss, const DecisionRule& rule,
                               const std::vector<double>& weights, double value) {
    const std::size_t nx = p.nx();
    const std::size_t na = loss.na();
    const auto c = contributions(p, loss);

    std::vector<double> base(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) base[j] = rule_loss(c[j], rule);

    EquilibriumCertificate cert;
    auto& e = cert.chain;
    e[0] = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) e[0] += weights[j] * base[j];
    e[1] = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < na; ++a) {
            double s = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j) s += weights[j] * c[j][x * na + a];
            best = std::min(best, s);
        }
        e[1] += best;
    }
    e[2] = maximin_value(c, nx, na);
    e[3] = value;
    e[4] = *std::max_element(base.begin(), base.end());
    for (std::size_t i = 0; i < 4; ++i) cert.equality_chain_residuals[i] = std::abs(e[i] - e[i + 1]);

    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < p.size(); ++j)
        if (weights[j] > kSupportWeight) support.push_back(j);
    double support_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j : support) {
        cert.support_condition_residual = std::max(cert.support_condition_residual, e[4] - base[j]);
        support_max = std::max(support_max, base[j]);
    }

    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<std::vector<double>> rows;
        for (std::size_t j : support) {
            double rest = base[j];
            for (std::size_t a = 0; a < na; ++a) rest -= rule(x, a) * c[j][x * na + a];
            std::vector<double> row(na);
            for (std::size_t a = 0; a < na; ++a) row[a] = rest + c[j][x * na + a];
            rows.push_back(std::move(row));
        }
        const double improved = minimax_action(rows, TieBreak::solver).value;
        cert.best_response_gap_agent = std::max(cert.best_response_gap_agent, support_max - improved);
    }
    cert.best_response_gap_bookie = std::max(0.0, e[4] - value);
    return cert;
}

BookieMixture mixture(const CredalSet& p, const std::vector<double>& weights) {
    BookieMixture m;
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
        if (weights[j] > kSupportWeight) total += weights[j];
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (weights[j] <= kSupportWeight) continue;
        m.support.push_back(p.vertex(j));
        m.vertex_index.push_back(j);
        m.weights.push_back(weights[j] / total);
    }
    return m;
}

JointDist aggregate(const BookieMixture& m) {
    const std::size_t nx = m.support.front().nx();
    const std::size_t ny = m.support.front().ny();
    std::vector<double> w(nx * ny, 0.0);
    for (std::size_t k = 0; k < m.support.size(); ++k)
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += m.weights[k] * m.support[k].weights()[i];
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return JointDist(nx, ny, std::move(w));
}

void enforce(const EquilibriumCertificate& cert, double tol, const char* game) {
    if (cert.passes(tol)) return;
    throw CertificateError(fmt::format(
        "{} certificate failed (tolerance {:g}): chain residuals [{:.3g}, {:.3g}, {:.3g}, {:.3g}], support {:.3g}, "
        "agent gap {:.3g}, bookie gap {:.3g}",
        game, tol, cert.equality_chain_residuals[0], cert.equality_chain_residuals[1], cert.equality_chain_residuals[2],
        cert.equality_chain_residuals[3], cert.support_condition_residual, cert.best_response_gap_agent,
        cert.best_response_gap_bookie));
}

}  // namespace

double EquilibriumCertificate::max_residual() const {
    double m = std::max({support_condition_residual, best_response_gap_agent, best_response_gap_bookie});
    for (double r : equality_chain_residuals) m = std::max(m, r);
    return m;
}

GameSolution solve_p_game(const CredalSet& p, const LossFn& loss, double tol) {
    const MinimaxResult agent = apriori_minimax(p, loss);
    BookieMixture bookie = mixture(p, agent.vertex_weights);
    JointDist pr = aggregate(bookie);
    GameSolution out{Equilibrium{std::move(bookie), agent.rule, agent.value, std::move(pr)},
                     certify(p, loss, agent.rule, agent.vertex_weights, agent.value)};
    enforce(out.certificate, tol, "P-game");
    return out;
}

GameSolution solve_px_game(const CredalSet& p, const LossFn& loss, std::size_t x, double tol) {
    if (x >= p.nx()) throw DimensionError("observation index out of range");
    const CredalSet cond = credal_condition(p, Event::observation(p.nx(), p.ny(), x));

    // The game against P | X = x: one observation, Y-distributions as vertices.
    std::vector<Point> ys;
    for (std::size_t j = 0; j < cond.size(); ++j) ys.push_back(marginal_y(cond.vertex(j)));
    const CredalSet local = CredalSet::from_extreme_points(1, p.ny(), ys);
    if (local.size() != cond.size()) throw NumericalError("conditional vertices collapsed on projection");

    std::vector<std::vector<double>> rows;
    for (const Point& q : ys) rows.push_back(action_losses(q, loss));
    const ActionSolution act = minimax_action(rows, TieBreak::pure_first);

    const DecisionRule local_rule(1, loss.na(), act.action);
    EquilibriumCertificate cert = certify(local, loss, local_rule, act.weights, act.value);

    BookieMixture bookie = mixture(cond, act.weights);
    JointDist pr = aggregate(bookie);
    GameSolution out{Equilibrium{std::move(bookie), DecisionRule::ignoring(p.nx(), act.action), act.value, std::move(pr)},
                     cert};
    enforce(out.certificate, tol, "P-x-game");
    return out;
}

TimeInconsistencyReport time_inconsistency_report(const CredalSet& p, const LossFn& loss, double tol) {
    TimeInconsistencyReport rep;
    rep.apriori = apriori_minimax(p, loss);
    rep.aposteriori = aposteriori_minimax(p, loss);
    const std::size_t nx = p.nx();
    rep.row_distance.resize(nx);
    rep.apriori_conditional_values.resize(nx);
    for (std::size_t x = 0; x < nx; ++x) {
        if (!rep.aposteriori.per_x_values[x]) continue;
        const double d = rep.apriori.rule.row_distance(rep.aposteriori.rule, x);
        rep.row_distance[x] = d;
        if (d > tol) rep.rules_differ = true;

        const auto cond_y = credal_marginal_y(credal_condition(p, Event::observation(nx, p.ny(), x)));
        const auto row = rep.apriori.rule.row(x);
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& r : action_loss_rows(cond_y, loss)) {
            double s = 0.0;
            for (std::size_t a = 0; a < row.size(); ++a) s += r[a] * row[a];
            worst = std::max(worst, s);
        }
        rep.apriori_conditional_values[x] = worst;
        if (std::abs(worst - *rep.aposteriori.per_x_values[x]) > tol) rep.values_differ = true;
    }
    if (std::abs(rep.aposteriori.value - rep.apriori.value) > tol) rep.values_differ = true;
    rep.apriori_game = "equilibrium strategy of the P-game (bookie commits before X is observed)";
    rep.aposteriori_game = "equilibrium strategy of the P-x-games (bookie chooses after X = x is observed)";
    return rep;
}

}  // namespace credo
