#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "credo/credal.hpp"
#include "credo/probability.hpp"

namespace credo {

/// How minimax_action picks among several optimal randomized actions.
enum class TieBreak {
    /// Whatever the simplex returns (lowest-index pivoting).
    solver,
    /// Lexicographically most even randomization among optimal actions
    /// (leximin over action probabilities).
    spread,
    /// Lowest-index pure action attaining the value, else `solver`.
    pure_first,
};

/// Randomized-action minimax against a finite list of loss vectors:
/// loss_rows[j][a] is the expected loss of action a under distribution j.
struct ActionSolution {
    std::vector<double> action;  // distribution over A
    double value = 0.0;          // min_r max_j loss_rows[j] . r
    std::vector<double> weights; // maximin mixture over the rows (LP duals)
};

ActionSolution minimax_action(const std::vector<std::vector<double>>& loss_rows, TieBreak tie_break);

/// loss_rows for minimax_action: one row per vertex of `outcomes`.
std::vector<std::vector<double>> action_loss_rows(const DistributionSet& outcomes, const LossFn& loss);

struct MinimaxResult {
    DecisionRule rule = DecisionRule::uniform(1, 1);
    /// max over the credal vertices of the rule's expected loss.
    double value = 0.0;
    std::vector<std::size_t> worst_case_vertices;
    /// A posteriori only: per-x minimax value, nullopt where P | X = x is empty.
    std::vector<std::optional<double>> per_x_values;
    /// A posteriori only: rows set to uniform because P | X = x is empty.
    std::vector<bool> unconstrained;
    /// A priori only: normalized duals of the vertex constraints.
    std::vector<double> vertex_weights;
};

/// Expected loss of `rule` under every vertex of p.
std::vector<double> vertex_losses(const CredalSet& p, const DecisionRule& rule, const LossFn& loss);

/// max_{Pr in P} E_Pr[L_rule], attained at a vertex.
double worst_case_loss(const CredalSet& p, const DecisionRule& rule, const LossFn& loss);

/// min over decision rules of the worst-case expected loss, by one LP over
/// (rule table, t) with a constraint per credal vertex.
MinimaxResult apriori_minimax(const CredalSet& p, const LossFn& loss);

/// Per observation, the randomized-action minimax against P | X = x.
MinimaxResult aposteriori_minimax(const CredalSet& p, const LossFn& loss, TieBreak tie_break = TieBreak::spread);

/// Minimax randomized action against (P | X = x)_Y. Throws EmptySetError if
/// P | X = x is empty.
ActionSolution conditional_minimax(const CredalSet& p, const LossFn& loss, std::size_t x, TieBreak tie_break);

struct ConditioningReport {
    bool hull_equal = false;    // P = ⟨P⟩
    bool full_support = false;  // every vertex gives every x positive mass
    double apriori_value = 0.0;
    std::vector<std::optional<double>> aposteriori_values;
    /// Best worst-case loss over rules that are also a posteriori optimal.
    std::optional<double> jointly_optimal_value;
    /// Some a priori optimal rule is a posteriori optimal.
    bool exists_jointly_optimal = false;
    /// The solver's a priori rule is a posteriori optimal at every defined x.
    bool apriori_rule_conditions = false;
    /// Largest excess of the a priori rule's conditional worst case over the
    /// a posteriori value.
    double max_conditional_gap = 0.0;
    /// The observed behaviour agrees with what P = ⟨P⟩ guarantees.
    bool consistent = false;
};

ConditioningReport check_conditioning_optimal(const CredalSet& p, const LossFn& loss, double tol = 1e-6);

enum class Verdict { holds, fails, indeterminate };

struct IgnoringReport {
    Verdict hypothesis = Verdict::fails;
    /// Per vertex of P_Y: some m has m (x) q in P.
    std::vector<bool> vertex_has_product;
    std::size_t samples = 0;
    std::size_t sample_failures = 0;
    DecisionRule ignoring_rule = DecisionRule::uniform(1, 1);
    double ignoring_value_y = 0.0;     // max_{P_Y} E[L'_delta]
    double ignoring_worst_case = 0.0;  // max_P E[L_delta]
    double apriori_value = 0.0;
    bool ignoring_optimal = false;
    bool identity_holds = false;
};

/// Checks whether ignoring the observation is a priori minimax optimal.
/// Interior points of P_Y are sampled with a fixed seed.
IgnoringReport check_ignoring_optimal(const CredalSet& p, const LossFn& loss, double tol = 1e-6,
                                      std::size_t samples = 100);

/// Some m in Delta(X) with m (x) q in conv(P).
bool has_product_with_marginal(const CredalSet& p, const Point& qy);

enum class Preference { better, worse, equivalent, incomparable };

struct WalleyComparison {
    Preference verdict = Preference::incomparable;
    double first_minus_second = 0.0;  // max_P E[L_1 - L_2]
    double second_minus_first = 0.0;  // max_P E[L_2 - L_1]
};

WalleyComparison walley_compare(const DecisionRule& first, const DecisionRule& second, const CredalSet& p,
                                const LossFn& loss, double tol = 1e-9);

const char* to_string(Preference p);
const char* to_string(Verdict v);

}  // namespace credo
