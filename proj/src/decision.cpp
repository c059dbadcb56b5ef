#include "credo/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "credo/errors.hpp"
#include "credo/numerics/lp.hpp"

namespace credo {

using numerics::LinearProgram;
using numerics::LpSolution;
using numerics::solve_lp;
using numerics::Vec;

namespace {

constexpr double kFaceTol = 1e-9;
// Optimal-face slack for the spread tie-break. Suboptimal actions can pick up
// weight of order kSpreadCap / (loss gap), so this stays near solver noise.
constexpr double kSpreadCap = 1e-12;

// Clamps solver noise and renormalizes one action distribution.
std::vector<double> clean_row(std::vector<double> r) {
    double total = 0.0;
    for (double& v : r) {
        if (v < 0.0) v = 0.0;
        total += v;
    }
    if (total <= 0.0) throw NumericalError("action distribution with zero total mass");
    for (double& v : r) v /= total;
    return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double worst_row(const std::vector<std::vector<double>>& rows, const std::vector<double>& r) {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) w = std::max(w, dot(row, r));
    return w;
}

LpSolution require_optimal(const LinearProgram& lp, const char* what) {
    LpSolution s = solve_lp(lp);
    if (!s.optimal()) throw NumericalError(std::string(what) + ": linear program not solved to optimality");
    return s;
}

// Variables r_0..r_{na-1} >= 0, then one extra variable. Adds sum r = 1 and
// rows . r <= cap.
LinearProgram face_program(const std::vector<std::vector<double>>& rows, std::size_t na, double cap) {
    LinearProgram lp(na + 1);
    Vec sum(na + 1, 0.0);
    for (std::size_t a = 0; a < na; ++a) sum[a] = 1.0;
    lp.add_eq(sum, 1.0);
    for (const auto& row : rows) {
        Vec r(na + 1, 0.0);
        std::copy(row.begin(), row.end(), r.begin());
        lp.add_le(r, cap);
    }
    lp.set_free(na);
    return lp;
}

// Leximin point of the optimal face {r : max_j rows_j . r <= value}.
std::vector<double> spread_action(const std::vector<std::vector<double>>& rows, std::size_t na, double value) {
    const double cap = value + kSpreadCap * std::max(1.0, std::abs(value));
    std::vector<std::optional<double>> level(na);
    std::size_t open = na;
    while (open > 0) {
        // Raise the smallest open coordinate as far as the face allows.
        LinearProgram lp = face_program(rows, na, cap);
        lp.objective[na] = -1.0;
        for (std::size_t a = 0; a < na; ++a) {
            Vec r(na + 1, 0.0);
            if (level[a]) {
                r[a] = -1.0;
                lp.add_le(r, -*level[a] + kFaceTol);
            } else {
                r[na] = 1.0;
                r[a] = -1.0;
                lp.add_le(r, 0.0);
            }
        }
        const double s = -require_optimal(lp, "spread tie-break").objective;

        std::size_t fixed = 0;
        std::size_t lowest = na;
        double lowest_top = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < na; ++a) {
            if (level[a]) continue;
            LinearProgram up = face_program(rows, na, cap);
            up.objective[a] = -1.0;
            for (std::size_t b = 0; b < na; ++b) {
                Vec r(na + 1, 0.0);
                r[b] = -1.0;
                up.add_le(r, -(level[b] ? *level[b] : s) + kFaceTol);
            }
            const double top = -require_optimal(up, "spread tie-break").objective;
            if (top < lowest_top) {
                lowest_top = top;
                lowest = a;
            }
            if (top <= s + 1e-9) {
                level[a] = s;
                ++fixed;
            }
        }
        if (fixed == 0) {
            level[lowest] = s;
            fixed = 1;
        }
        open -= fixed;
    }
    // Levels this small are the face slack leaking into unused actions.
    std::vector<double> r(na);
    for (std::size_t a = 0; a < na; ++a) r[a] = *level[a] < 1e-7 ? 0.0 : *level[a];
    return clean_row(std::move(r));
}

// Rows of the conditional minimax at x: expected loss of each action under each
// vertex of (P | X = x)_Y.
std::vector<std::vector<double>> conditional_rows(const CredalSet& p, const LossFn& loss, std::size_t x) {
    const Event ex = Event::observation(p.nx(), p.ny(), x);
    return action_loss_rows(credal_marginal_y(credal_condition(p, ex)), loss);
}

void check_dims(const CredalSet& p, const LossFn& loss) {
    if (p.ny() != loss.ny()) throw DimensionError("credal set and loss disagree on |Y|");
}

std::vector<std::size_t> attaining(const std::vector<double>& losses, double value) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < losses.size(); ++j)
        if (losses[j] >= value - 1e-7 * std::max(1.0, std::abs(value))) out.push_back(j);
    return out;
}

}  // namespace

std::vector<std::vector<double>> action_loss_rows(const DistributionSet& outcomes, const LossFn& loss) {
    std::vector<std::vector<double>> rows;
    rows.reserve(outcomes.size());
    for (const Point& q : outcomes.vertices()) rows.push_back(action_losses(q, loss));
    return rows;
}

ActionSolution minimax_action(const std::vector<std::vector<double>>& loss_rows, TieBreak tie_break) {
    if (loss_rows.empty()) throw EmptySetError("minimax action: no loss rows");
    const std::size_t na = loss_rows.front().size();
    for (const auto& row : loss_rows)
        if (row.size() != na || na == 0) throw DimensionError("minimax action: ragged loss rows");

    // minimize t  s.t.  sum r = 1,  rows_j . r - t <= 0,  r >= 0, t free
    LinearProgram lp = face_program({}, na, 0.0);
    lp.objective[na] = 1.0;
    for (const auto& row : loss_rows) {
        Vec r(na + 1, -1.0);
        std::copy(row.begin(), row.end(), r.begin());
        lp.add_le(r, 0.0);
    }
    const LpSolution sol = require_optimal(lp, "minimax action");

    ActionSolution out;
    out.value = sol.objective;
    out.weights.resize(loss_rows.size());
    double total = 0.0;
    for (std::size_t j = 0; j < loss_rows.size(); ++j) {
        out.weights[j] = std::max(0.0, -sol.dual[1 + j]);
        total += out.weights[j];
    }
    if (total <= 0.0) throw NumericalError("minimax action: degenerate dual mixture");
    for (double& w : out.weights) w /= total;

    out.action = clean_row(std::vector<double>(sol.primal.begin(), sol.primal.begin() + static_cast<std::ptrdiff_t>(na)));
    const double cap = out.value + kFaceTol * std::max(1.0, std::abs(out.value));
    switch (tie_break) {
    case TieBreak::solver:
        break;
    case TieBreak::pure_first:
        for (std::size_t a = 0; a < na; ++a) {
            std::vector<double> e(na, 0.0);
            e[a] = 1.0;
            if (worst_row(loss_rows, e) <= cap) {
                out.action = std::move(e);
                break;
            }
        }
        break;
    case TieBreak::spread: {
        std::vector<double> r = spread_action(loss_rows, na, out.value);
        if (worst_row(loss_rows, r) <= out.value + 1e-7 * std::max(1.0, std::abs(out.value))) out.action = std::move(r);
        break;
    }
    }
    return out;
}

std::vector<double> vertex_losses(const CredalSet& p, const DecisionRule& rule, const LossFn& loss) {
    std::vector<double> out;
    out.reserve(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) out.push_back(expected_loss(p.vertex(j), rule, loss));
    return out;
}

double worst_case_loss(const CredalSet& p, const DecisionRule& rule, const LossFn& loss) {
    const auto l = vertex_losses(p, rule, loss);
    return *std::max_element(l.begin(), l.end());
}

MinimaxResult apriori_minimax(const CredalSet& p, const LossFn& loss) {
    check_dims(p, loss);
    const std::size_t nx = p.nx();
    const std::size_t ny = p.ny();
    const std::size_t na = loss.na();
    const std::size_t t = nx * na;

    // Variables delta(x)(a) at x * na + a, then t (free).
    LinearProgram lp(t + 1);
    lp.objective[t] = 1.0;
    for (std::size_t x = 0; x < nx; ++x) {
        Vec row(t + 1, 0.0);
        for (std::size_t a = 0; a < na; ++a) row[x * na + a] = 1.0;
        lp.add_eq(row, 1.0);
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        const JointDist v = p.vertex(j);
        Vec row(t + 1, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t a = 0; a < na; ++a) {
                double s = 0.0;
                for (std::size_t y = 0; y < ny; ++y) s += v(x, y) * loss(y, a);
                row[x * na + a] = s;
            }
        row[t] = -1.0;
        lp.add_le(row, 0.0);
    }
    lp.set_free(t);
    const LpSolution sol = require_optimal(lp, "a priori minimax");

    std::vector<double> table;
    table.reserve(t);
    for (std::size_t x = 0; x < nx; ++x) {
        auto row = clean_row(
            std::vector<double>(sol.primal.begin() + static_cast<std::ptrdiff_t>(x * na),
                                sol.primal.begin() + static_cast<std::ptrdiff_t>((x + 1) * na)));
        table.insert(table.end(), row.begin(), row.end());
    }

    MinimaxResult out;
    out.rule = DecisionRule(nx, na, std::move(table));
    out.value = sol.objective;
    out.worst_case_vertices = attaining(vertex_losses(p, out.rule, loss), out.value);
    out.vertex_weights.resize(p.size());
    double total = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        out.vertex_weights[j] = std::max(0.0, -sol.dual[nx + j]);
        total += out.vertex_weights[j];
    }
    if (total <= 0.0) throw NumericalError("a priori minimax: degenerate dual mixture");
    for (double& w : out.vertex_weights) w /= total;
    return out;
}

ActionSolution conditional_minimax(const CredalSet& p, const LossFn& loss, std::size_t x, TieBreak tie_break) {
    check_dims(p, loss);
    if (x >= p.nx()) throw DimensionError("observation index out of range");
    return minimax_action(conditional_rows(p, loss, x), tie_break);
}

MinimaxResult aposteriori_minimax(const CredalSet& p, const LossFn& loss, TieBreak tie_break) {
    check_dims(p, loss);
    const std::size_t nx = p.nx();
    const std::size_t na = loss.na();
    std::vector<double> table;
    std::vector<std::optional<double>> values(nx);
    std::vector<bool> unconstrained(nx, false);
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> row;
        if (can_condition(p, Event::observation(nx, p.ny(), x))) {
            ActionSolution s = conditional_minimax(p, loss, x, tie_break);
            values[x] = s.value;
            row = std::move(s.action);
        } else {
            row.assign(na, 1.0 / static_cast<double>(na));
            unconstrained[x] = true;
        }
        table.insert(table.end(), row.begin(), row.end());
    }
    MinimaxResult out;
    out.rule = DecisionRule(nx, na, std::move(table));
    const auto losses = vertex_losses(p, out.rule, loss);
    out.value = *std::max_element(losses.begin(), losses.end());
    out.worst_case_vertices = attaining(losses, out.value);
    out.per_x_values = std::move(values);
    out.unconstrained = std::move(unconstrained);
    return out;
}

ConditioningReport check_conditioning_optimal(const CredalSet& p, const LossFn& loss, double tol) {
    check_dims(p, loss);
    const std::size_t nx = p.nx();
    const std::size_t na = loss.na();
    ConditioningReport rep;
    rep.hull_equal = credal_equal(p, build_hull(p));
    rep.full_support = true;
    for (std::size_t j = 0; j < p.size(); ++j)
        for (double m : marginal_x(p.vertex(j)))
            if (m <= kPositiveMass) rep.full_support = false;

    const MinimaxResult prior = apriori_minimax(p, loss);
    const MinimaxResult post = aposteriori_minimax(p, loss);
    rep.apriori_value = prior.value;
    rep.aposteriori_values = post.per_x_values;

    // The a priori program restricted to rules whose row at every defined x
    // is a posteriori optimal.
    const std::size_t t = nx * na;
    LinearProgram lp(t + 1);
    lp.objective[t] = 1.0;
    for (std::size_t x = 0; x < nx; ++x) {
        Vec row(t + 1, 0.0);
        for (std::size_t a = 0; a < na; ++a) row[x * na + a] = 1.0;
        lp.add_eq(row, 1.0);
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        Vec row(t + 1, 0.0);
        const JointDist v = p.vertex(j);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t y = 0; y < p.ny(); ++y) row[x * na + a] += v(x, y) * loss(y, a);
        row[t] = -1.0;
        lp.add_le(row, 0.0);
    }
    rep.apriori_rule_conditions = true;
    for (std::size_t x = 0; x < nx; ++x) {
        if (!rep.aposteriori_values[x]) continue;
        const double vx = *rep.aposteriori_values[x];
        const auto rows = conditional_rows(p, loss, x);
        for (const auto& r : rows) {
            Vec row(t + 1, 0.0);
            std::copy(r.begin(), r.end(), row.begin() + static_cast<std::ptrdiff_t>(x * na));
            lp.add_le(row, vx + kFaceTol * std::max(1.0, std::abs(vx)));
        }
        const double gap = worst_row(rows, prior.rule.row(x)) - vx;
        rep.max_conditional_gap = std::max(rep.max_conditional_gap, gap);
        if (gap > tol) rep.apriori_rule_conditions = false;
    }
    lp.set_free(t);
    const LpSolution joint = solve_lp(lp);
    if (joint.optimal()) rep.jointly_optimal_value = joint.objective;
    rep.exists_jointly_optimal = rep.jointly_optimal_value && *rep.jointly_optimal_value <= rep.apriori_value + tol;

    rep.consistent = !rep.hull_equal || (rep.exists_jointly_optimal && (!rep.full_support || rep.apriori_rule_conditions));
    return rep;
}

bool has_product_with_marginal(const CredalSet& p, const Point& qy) {
    const std::size_t nx = p.nx();
    const std::size_t ny = p.ny();
    if (qy.size() != ny) throw DimensionError("product test: marginal over Y has the wrong size");
    const std::size_t nv = p.size();
    // Variables m (nx), lambda (nv): sum_j lambda_j V_j(x, y) = m(x) q(y).
    LinearProgram lp(nx + nv);
    Vec sm(nx + nv, 0.0);
    Vec sl(nx + nv, 0.0);
    for (std::size_t x = 0; x < nx; ++x) sm[x] = 1.0;
    for (std::size_t j = 0; j < nv; ++j) sl[nx + j] = 1.0;
    lp.add_eq(sm, 1.0);
    lp.add_eq(sl, 1.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            Vec row(nx + nv, 0.0);
            row[x] = -qy[y];
            for (std::size_t j = 0; j < nv; ++j) row[nx + j] = p.points()[j][x * ny + y];
            lp.add_eq(row, 0.0);
        }
    return solve_lp(lp).optimal();
}

IgnoringReport check_ignoring_optimal(const CredalSet& p, const LossFn& loss, double tol, std::size_t samples) {
    check_dims(p, loss);
    IgnoringReport rep;
    const DistributionSet py = credal_marginal_y(p);

    for (const Point& q : py.vertices()) rep.vertex_has_product.push_back(has_product_with_marginal(p, q));
    const bool vertices_ok =
        std::all_of(rep.vertex_has_product.begin(), rep.vertex_has_product.end(), [](bool b) { return b; });

    if (vertices_ok && py.size() > 1) {
        std::mt19937_64 rng(0x5eedc0ffeeULL);
        std::exponential_distribution<double> expo(1.0);
        for (std::size_t s = 0; s < samples; ++s) {
            std::vector<double> w(py.size());
            double total = 0.0;
            for (double& v : w) total += (v = expo(rng));
            Point q(p.ny(), 0.0);
            for (std::size_t k = 0; k < py.size(); ++k)
                for (std::size_t y = 0; y < p.ny(); ++y) q[y] += w[k] / total * py.vertices()[k][y];
            ++rep.samples;
            if (!has_product_with_marginal(p, q)) ++rep.sample_failures;
        }
    }
    rep.hypothesis = !vertices_ok ? Verdict::fails : rep.sample_failures > 0 ? Verdict::indeterminate : Verdict::holds;

    const ActionSolution best = minimax_action(action_loss_rows(py, loss), TieBreak::spread);
    rep.ignoring_rule = DecisionRule::ignoring(p.nx(), best.action);
    rep.ignoring_value_y = worst_row(action_loss_rows(py, loss), best.action);
    rep.ignoring_worst_case = worst_case_loss(p, rep.ignoring_rule, loss);
    rep.apriori_value = apriori_minimax(p, loss).value;
    rep.ignoring_optimal = std::abs(rep.ignoring_worst_case - rep.apriori_value) <= tol;
    rep.identity_holds = std::abs(rep.ignoring_worst_case - rep.ignoring_value_y) <= tol;
    return rep;
}

WalleyComparison walley_compare(const DecisionRule& first, const DecisionRule& second, const CredalSet& p,
                                const LossFn& loss, double tol) {
    if (first.nx() != second.nx() || first.na() != second.na())
        throw DimensionError("comparing rules over different spaces");
    const auto l1 = vertex_losses(p, first, loss);
    const auto l2 = vertex_losses(p, second, loss);
    WalleyComparison out;
    out.first_minus_second = -std::numeric_limits<double>::infinity();
    out.second_minus_first = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < l1.size(); ++j) {
        out.first_minus_second = std::max(out.first_minus_second, l1[j] - l2[j]);
        out.second_minus_first = std::max(out.second_minus_first, l2[j] - l1[j]);
    }
    const bool a = out.first_minus_second <= tol;
    const bool b = out.second_minus_first <= tol;
    out.verdict = a && b ? Preference::equivalent : a ? Preference::better : b ? Preference::worse : Preference::incomparable;
    return out;
}

const char* to_string(Preference p) {
    switch (p) {
    case Preference::better: return "better";
    case Preference::worse: return "worse";
    case Preference::equivalent: return "equivalent";
    case Preference::incomparable: return "incomparable";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

}  // namespace credo
