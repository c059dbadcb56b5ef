#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "credo/credal.hpp"
#include "credo/decision.hpp"
#include "credo/probability.hpp"

namespace credo {

/// Bookie's mixed strategy: finite distribution over credal vertices.
struct BookieMixture {
    std::vector<JointDist> support;
    std::vector<std::size_t> vertex_index;  // position of each support point in its credal set
    std::vector<double> weights;
};

struct Equilibrium {
    BookieMixture bookie;
    DecisionRule agent;
    double value = 0.0;
    /// sum_j weights_j support_j
    JointDist aggregate;
};

/**
 * Runtime check of an equilibrium. `chain` holds, in order,
 *   E_{Pr*}[L_agent], min_rule E_{Pr*}[L_rule], max_Pr min_rule E_Pr[L_rule],
 *   min_rule max_Pr E_Pr[L_rule], max_Pr E_Pr[L_agent]
 * and `equality_chain_residuals` the gaps between neighbours.
 */
struct EquilibriumCertificate {
    std::array<double, 5> chain{};
    std::array<double, 4> equality_chain_residuals{};
    /// Largest shortfall of a support vertex below the agent's worst case.
    double support_condition_residual = 0.0;
    /// Largest improvement a single-row change gives the agent against the support.
    double best_response_gap_agent = 0.0;
    /// Largest excess of any vertex over the game value.
    double best_response_gap_bookie = 0.0;

    double max_residual() const;
    bool passes(double tol) const { return max_residual() <= tol; }
};

struct GameSolution {
    Equilibrium equilibrium;
    EquilibriumCertificate certificate;
};

/// Bookie picks Pr in P before the observation. Throws CertificateError when
/// any residual exceeds tol.
GameSolution solve_p_game(const CredalSet& p, const LossFn& loss, double tol = 1e-6);

/// Bookie picks from P | X = x after the observation. The agent rule plays the
/// equilibrium action at every row. Throws EmptySetError when P | X = x is
/// empty, CertificateError when any residual exceeds tol.
GameSolution solve_px_game(const CredalSet& p, const LossFn& loss, std::size_t x, double tol = 1e-6);

struct TimeInconsistencyReport {
    MinimaxResult apriori;
    MinimaxResult aposteriori;
    /// Total-variation distance between the two rules' rows; nullopt where
    /// P | X = x is empty.
    std::vector<std::optional<double>> row_distance;
    /// Worst case of the a priori rule's row against P | X = x.
    std::vector<std::optional<double>> apriori_conditional_values;
    bool rules_differ = false;
    bool values_differ = false;
    bool inconsistent() const { return rules_differ || values_differ; }
    std::string apriori_game;
    std::string aposteriori_game;
};

TimeInconsistencyReport time_inconsistency_report(const CredalSet& p, const LossFn& loss, double tol = 1e-6);

}  // namespace credo
