#pragma once

#include <cstddef>
#include <vector>

namespace credo::numerics {

using Vec = std::vector<double>;

/// Lower bound of a single variable. Variables are bounded below by
/// `lower` unless `free` is set.
struct Bound {
    bool free = false;
    double lower = 0.0;

    static Bound at_least(double v) { return {false, v}; }
    static Bound unbounded() { return {true, 0.0}; }
};

/**
 * A linear program in the form
 *
 *     minimize    c'x
 *     subject to  A_eq x  = b_eq
 *                 A_le x <= b_le
 *                 x_j >= lower_j   (unless free)
 *
 * Rows are dense. Use the add_* helpers to keep the row widths consistent.
 */
struct LinearProgram {
    Vec objective;
    std::vector<Vec> eq_rows;
    Vec eq_rhs;
    std::vector<Vec> le_rows;
    Vec le_rhs;
    std::vector<Bound> bounds;  // empty means every variable >= 0

    LinearProgram() = default;
    explicit LinearProgram(std::size_t num_vars) : objective(num_vars, 0.0) {}

    std::size_t num_vars() const { return objective.size(); }

    void add_eq(Vec row, double rhs);
    void add_le(Vec row, double rhs);
    /// Stored as the negated <= row.
    void add_ge(Vec row, double rhs);
    void set_free(std::size_t var);

    /// Throws DimensionError when any row or the bound list has the wrong width.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

/**
 * Result of solve_lp.
 *
 * Duals follow the Lagrangian sign convention for minimization: the reduced
 * costs r = c - A_eq' y_eq - A_le' y_le are >= 0 on bounded variables and 0 on
 * free ones, and y_le <= 0. `dual` lists the equality multipliers first, then
 * the inequality multipliers, in insertion order.
 */
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vec primal;
    Vec dual;
    double objective = 0.0;
    double dual_objective = 0.0;

    // Certification residuals, filled when status == optimal.
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double complementarity = 0.0;

    double duality_gap() const;
    bool optimal() const { return status == LpStatus::optimal; }
};

/// Dense two-phase primal simplex with Bland's rule. Deterministic.
/// Throws DimensionError on malformed input, NumericalError when no status
/// can be certified within the iteration budget.
LpSolution solve_lp(const LinearProgram& lp);

/// Worst residuals of every optimal LP solved on the calling thread while an
/// audit is active. Used by the acceptance suite to audit strong duality
/// across whole workloads.
struct LpAuditTotals {
    std::size_t solved = 0;
    double max_duality_gap = 0.0;
    double max_primal_residual = 0.0;
    double max_complementarity = 0.0;
};

class ScopedLpAudit {
public:
    ScopedLpAudit();
    ~ScopedLpAudit();
    ScopedLpAudit(const ScopedLpAudit&) = delete;
    ScopedLpAudit& operator=(const ScopedLpAudit&) = delete;

    const LpAuditTotals& totals() const { return totals_; }

private:
    LpAuditTotals totals_;
    LpAuditTotals* previous_;
};

}  // namespace credo::numerics
