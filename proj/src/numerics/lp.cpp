#include "credo/numerics/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "credo/errors.hpp"

namespace credo::numerics {

void LinearProgram::add_eq(Vec row, double rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_le(Vec row, double rhs) {
    le_rows.push_back(std::move(row));
    le_rhs.push_back(rhs);
}

void LinearProgram::add_ge(Vec row, double rhs) {
    for (double& v : row) v = -v;
    add_le(std::move(row), -rhs);
}

void LinearProgram::set_free(std::size_t var) {
    if (bounds.empty()) bounds.assign(num_vars(), Bound{});
    bounds.at(var) = Bound::unbounded();
}

void LinearProgram::validate() const {
    const std::size_t n = num_vars();
    if (eq_rows.size() != eq_rhs.size() || le_rows.size() != le_rhs.size())
        throw DimensionError("linear program: row count and right-hand side count differ");
    for (const auto& r : eq_rows)
        if (r.size() != n)
            throw DimensionError("linear program: equality row has width " + std::to_string(r.size()) +
                                 ", expected " + std::to_string(n));
    for (const auto& r : le_rows)
        if (r.size() != n)
            throw DimensionError("linear program: inequality row has width " + std::to_string(r.size()) +
                                 ", expected " + std::to_string(n));
    if (!bounds.empty() && bounds.size() != n)
        throw DimensionError("linear program: bound list has the wrong length");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(objective.begin(), objective.end(), finite) ||
        !std::all_of(eq_rhs.begin(), eq_rhs.end(), finite) ||
        !std::all_of(le_rhs.begin(), le_rhs.end(), finite))
        throw DimensionError("linear program: non-finite coefficient");
}

double LpSolution::duality_gap() const { return std::abs(objective - dual_objective); }

namespace {

thread_local LpAuditTotals* active_audit = nullptr;

// Columns: expanded structural variables, then one slack per <= row, then one
// artificial per row. Every row has a nonnegative right-hand side.
struct StandardForm {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd cost;
    Eigen::Index first_artificial = 0;
    std::vector<double> row_sign;
    std::vector<Eigen::Index> pos_col;
    std::vector<Eigen::Index> neg_col;  // -1 unless the variable is free
    std::vector<double> shift;          // lower bound folded into the rhs
};

StandardForm to_standard_form(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars();
    const std::size_t m_eq = lp.eq_rows.size();
    const std::size_t m_le = lp.le_rows.size();
    const auto m = static_cast<Eigen::Index>(m_eq + m_le);

    StandardForm sf;
    sf.pos_col.resize(n);
    sf.neg_col.assign(n, -1);
    sf.shift.assign(n, 0.0);
    Eigen::Index cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const Bound bd = lp.bounds.empty() ? Bound{} : lp.bounds[j];
        sf.pos_col[j] = cols++;
        if (bd.free)
            sf.neg_col[j] = cols++;
        else
            sf.shift[j] = bd.lower;
    }
    const Eigen::Index first_slack = cols;
    cols += static_cast<Eigen::Index>(m_le);
    sf.first_artificial = cols;
    cols += m;

    sf.a = Eigen::MatrixXd::Zero(m, cols);
    sf.b = Eigen::VectorXd::Zero(m);
    sf.cost = Eigen::VectorXd::Zero(cols);
    sf.row_sign.assign(static_cast<std::size_t>(m), 1.0);

    for (std::size_t j = 0; j < n; ++j) {
        sf.cost(sf.pos_col[j]) = lp.objective[j];
        if (sf.neg_col[j] >= 0) sf.cost(sf.neg_col[j]) = -lp.objective[j];
    }

    auto fill_row = [&](Eigen::Index i, const Vec& row, double rhs) {
        double r = rhs;
        for (std::size_t j = 0; j < n; ++j) {
            sf.a(i, sf.pos_col[j]) = row[j];
            if (sf.neg_col[j] >= 0) sf.a(i, sf.neg_col[j]) = -row[j];
            r -= row[j] * sf.shift[j];
        }
        sf.b(i) = r;
    };
    for (std::size_t i = 0; i < m_eq; ++i) fill_row(static_cast<Eigen::Index>(i), lp.eq_rows[i], lp.eq_rhs[i]);
    for (std::size_t i = 0; i < m_le; ++i) {
        const auto row = static_cast<Eigen::Index>(m_eq + i);
        fill_row(row, lp.le_rows[i], lp.le_rhs[i]);
        sf.a(row, first_slack + static_cast<Eigen::Index>(i)) = 1.0;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        if (sf.b(i) < 0.0) {
            sf.a.row(i) *= -1.0;
            sf.b(i) = -sf.b(i);
            sf.row_sign[static_cast<std::size_t>(i)] = -1.0;
        }
        sf.a(i, sf.first_artificial + i) = 1.0;
    }
    return sf;
}

enum class RunResult { optimal, unbounded };

class Tableau {
public:
    Tableau(const StandardForm& sf, std::size_t budget)
        : t_(sf.a.rows(), sf.a.cols() + 1), basis_(static_cast<std::size_t>(sf.a.rows())), budget_(budget) {
        t_.leftCols(sf.a.cols()) = sf.a;
        t_.col(sf.a.cols()) = sf.b;
        for (Eigen::Index i = 0; i < sf.a.rows(); ++i) basis_[static_cast<std::size_t>(i)] = sf.first_artificial + i;
    }

    Eigen::Index cols() const { return t_.cols() - 1; }
    Eigen::Index rows() const { return t_.rows(); }
    const std::vector<Eigen::Index>& basis() const { return basis_; }

    void price(const Eigen::VectorXd& cost) {
        cost_scale_ = cost.size() > 0 ? std::max(1.0, cost.cwiseAbs().maxCoeff()) : 1.0;
        reduced_.resize(t_.cols());
        reduced_.head(cols()) = cost;
        reduced_(cols()) = 0.0;
        for (Eigen::Index i = 0; i < rows(); ++i) {
            const double cb = cost(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0) reduced_ -= cb * t_.row(i).transpose();
        }
    }

    // Current objective value for the priced costs.
    double objective() const { return -reduced_(cols()); }

    RunResult run(Eigen::Index allowed_cols) {
        const double cost_tol = 1e-11 * cost_scale_;
        std::vector<char> is_basic(static_cast<std::size_t>(cols()), 0);
        for (auto bcol : basis_) is_basic[static_cast<std::size_t>(bcol)] = 1;
        for (;;) {
            if (iterations_++ > budget_)
                throw NumericalError("simplex: iteration budget exhausted without certifying a status");
            // Bland: lowest-index improving column enters.
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed_cols; ++j) {
                if (!is_basic[static_cast<std::size_t>(j)] && reduced_(j) < -cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return RunResult::optimal;

            Eigen::Index leave = -1;
            double best = 0.0;
            for (Eigen::Index i = 0; i < rows(); ++i) {
                const double piv = t_(i, enter);
                if (piv <= kPivotTol) continue;
                const double ratio = t_(i, cols()) / piv;
                const double slack = 1e-12 * (1.0 + std::abs(best));
                if (leave < 0 || ratio < best - slack) {
                    leave = i;
                    best = ratio;
                } else if (ratio <= best + slack &&
                           basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
                    // Ties go to the lowest basic index.
                    leave = i;
                    best = std::min(best, ratio);
                }
            }
            if (leave < 0) return RunResult::unbounded;
            is_basic[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)])] = 0;
            is_basic[static_cast<std::size_t>(enter)] = 1;
            pivot(leave, enter);
        }
    }

    // Pivots basic artificials out wherever a nonzero structural entry exists.
    // Rows left with a basic artificial are redundant.
    void expel_artificials(Eigen::Index first_artificial) {
        for (Eigen::Index i = 0; i < rows(); ++i) {
            if (basis_[static_cast<std::size_t>(i)] < first_artificial) continue;
            Eigen::Index col = -1;
            double best = 1e-9;
            for (Eigen::Index j = 0; j < first_artificial; ++j) {
                if (std::abs(t_(i, j)) > best && !in_basis(j)) {
                    col = j;
                    break;
                }
            }
            if (col < 0) continue;
            t_(i, cols()) = 0.0;
            pivot(i, col);
        }
    }

private:
    static constexpr double kPivotTol = 1e-11;

    bool in_basis(Eigen::Index j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

    void pivot(Eigen::Index r, Eigen::Index e) {
        t_.row(r) /= t_(r, e);
        for (Eigen::Index i = 0; i < rows(); ++i) {
            if (i == r) continue;
            const double f = t_(i, e);
            if (f != 0.0) t_.row(i) -= f * t_.row(r);
            t_(i, e) = 0.0;
        }
        if (reduced_.size() > 0) {
            const double f = reduced_(e);
            if (f != 0.0) reduced_ -= f * t_.row(r).transpose();
            reduced_(e) = 0.0;
        }
        basis_[static_cast<std::size_t>(r)] = e;
    }

    Eigen::MatrixXd t_;
    Eigen::VectorXd reduced_;
    std::vector<Eigen::Index> basis_;
    std::size_t budget_;
    std::size_t iterations_ = 0;
    double cost_scale_ = 1.0;
};

double data_scale(const LinearProgram& lp) {
    double s = 1.0;
    auto upd = [&s](const Vec& v) {
        for (double x : v) s = std::max(s, std::abs(x));
    };
    upd(lp.objective);
    upd(lp.eq_rhs);
    upd(lp.le_rhs);
    for (const auto& r : lp.eq_rows) upd(r);
    for (const auto& r : lp.le_rows) upd(r);
    return s;
}

void certify(const LinearProgram& lp, LpSolution& sol) {
    const std::size_t n = lp.num_vars();
    const std::size_t m_eq = lp.eq_rows.size();
    const auto& x = sol.primal;
    const auto& y = sol.dual;

    Vec reduced(lp.objective);
    double primal_res = 0.0;
    double dual_res = 0.0;
    double comp = 0.0;
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m_eq; ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ax += lp.eq_rows[i][j] * x[j];
            reduced[j] -= y[i] * lp.eq_rows[i][j];
        }
        primal_res = std::max(primal_res, std::abs(ax - lp.eq_rhs[i]));
        dual_obj += y[i] * lp.eq_rhs[i];
    }
    for (std::size_t i = 0; i < lp.le_rows.size(); ++i) {
        const double yi = y[m_eq + i];
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ax += lp.le_rows[i][j] * x[j];
            reduced[j] -= yi * lp.le_rows[i][j];
        }
        primal_res = std::max(primal_res, ax - lp.le_rhs[i]);
        dual_res = std::max(dual_res, yi);
        comp = std::max(comp, std::abs(yi * (lp.le_rhs[i] - ax)));
        dual_obj += yi * lp.le_rhs[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Bound bd = lp.bounds.empty() ? Bound{} : lp.bounds[j];
        if (bd.free) {
            dual_res = std::max(dual_res, std::abs(reduced[j]));
        } else {
            primal_res = std::max(primal_res, bd.lower - x[j]);
            dual_res = std::max(dual_res, -reduced[j]);
            comp = std::max(comp, std::abs(reduced[j] * (x[j] - bd.lower)));
            dual_obj += bd.lower * reduced[j];
        }
    }
    sol.primal_residual = std::max(primal_res, 0.0);
    sol.dual_residual = std::max(dual_res, 0.0);
    sol.complementarity = comp;
    sol.dual_objective = dual_obj;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    lp.validate();
    const StandardForm sf = to_standard_form(lp);
    const auto m = sf.a.rows();
    const auto cols = sf.a.cols();
    Tableau tab(sf, static_cast<std::size_t>(100 * (m + cols) + 1000));

    LpSolution sol;
    const double scale = data_scale(lp);

    // Phase 1: minimize the sum of artificials.
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(cols - sf.first_artificial).setOnes();
    tab.price(phase1);
    tab.run(cols);
    if (tab.objective() > 1e-9 * std::max(1.0, sf.b.size() ? sf.b.cwiseAbs().maxCoeff() : 0.0)) {
        sol.status = LpStatus::infeasible;
        return sol;
    }
    tab.expel_artificials(sf.first_artificial);

    // Phase 2 on the original costs; artificials may not re-enter.
    tab.price(sf.cost);
    if (tab.run(sf.first_artificial) == RunResult::unbounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    // Re-solve the final basis directly for clean primal and dual values.
    Eigen::MatrixXd basis_mat(m, m);
    Eigen::VectorXd basis_cost(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto col = tab.basis()[static_cast<std::size_t>(i)];
        basis_mat.col(i) = sf.a.col(col);
        basis_cost(i) = sf.cost(col);
    }
    Eigen::VectorXd xb(m);
    Eigen::VectorXd ystd(m);
    if (m > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
        if (!lu.isInvertible()) throw NumericalError("simplex: final basis is singular");
        xb = lu.solve(sf.b);
        ystd = lu.transpose().solve(basis_cost);
    }

    Eigen::VectorXd xstd = Eigen::VectorXd::Zero(cols);
    for (Eigen::Index i = 0; i < m; ++i) {
        double v = xb(i);
        if (v < 0.0 && v > -1e-9 * scale) v = 0.0;
        xstd(tab.basis()[static_cast<std::size_t>(i)]) = v;
    }

    const std::size_t n = lp.num_vars();
    sol.status = LpStatus::optimal;
    sol.primal.resize(n);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double v = sf.shift[j] + xstd(sf.pos_col[j]);
        if (sf.neg_col[j] >= 0) v -= xstd(sf.neg_col[j]);
        sol.primal[j] = v;
        sol.objective += lp.objective[j] * v;
    }
    sol.dual.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
        sol.dual[static_cast<std::size_t>(i)] = sf.row_sign[static_cast<std::size_t>(i)] * ystd(i);

    certify(lp, sol);
    if (sol.primal_residual > 1e-6 * scale || sol.dual_residual > 1e-6 * scale ||
        sol.duality_gap() > 1e-6 * scale * std::max(1.0, std::abs(sol.objective)))
        throw NumericalError("simplex: optimal basis failed certification (primal residual " +
                             std::to_string(sol.primal_residual) + ", dual residual " +
                             std::to_string(sol.dual_residual) + ", gap " + std::to_string(sol.duality_gap()) + ")");

    if (active_audit != nullptr) {
        auto& a = *active_audit;
        ++a.solved;
        a.max_duality_gap = std::max(a.max_duality_gap, sol.duality_gap());
        a.max_primal_residual = std::max(a.max_primal_residual, sol.primal_residual);
        a.max_complementarity = std::max(a.max_complementarity, sol.complementarity);
    }
    return sol;
}

ScopedLpAudit::ScopedLpAudit() : previous_(active_audit) { active_audit = &totals_; }

ScopedLpAudit::~ScopedLpAudit() {
    active_audit = previous_;
    if (previous_ != nullptr) {
        previous_->solved += totals_.solved;
        previous_->max_duality_gap = std::max(previous_->max_duality_gap, totals_.max_duality_gap);
        previous_->max_primal_residual = std::max(previous_->max_primal_residual, totals_.max_primal_residual);
        previous_->max_complementarity = std::max(previous_->max_complementarity, totals_.max_complementarity);
    }
}

}  // namespace credo::numerics
