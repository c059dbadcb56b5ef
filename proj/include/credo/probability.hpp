#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace credo {

/// Hard cap on |X|, |Y| and |A|.
inline constexpr std::size_t kMaxLabels = 16;

/// Masses at or below this count as zero when conditioning.
inline constexpr double kPositiveMass = 1e-12;

/// Tolerance on the unit sum of distributions and rule rows.
inline constexpr double kSumTol = 1e-9;

/// Observation space X, outcome space Y and action space A, by label.
struct SpaceSpec {
    std::vector<std::string> x_labels;
    std::vector<std::string> y_labels;
    std::vector<std::string> a_labels;

    std::size_t nx() const { return x_labels.size(); }
    std::size_t ny() const { return y_labels.size(); }
    std::size_t na() const { return a_labels.size(); }

    /// Nonempty, unique labels, sizes within kMaxLabels; throws ValidationError.
    void validate() const;

    std::size_t x_index(const std::string& label) const;
    std::size_t y_index(const std::string& label) const;
    std::size_t a_index(const std::string& label) const;

    bool operator==(const SpaceSpec&) const = default;
};

/**
 * Probability distribution on X x Y, stored row-major: weight(x, y) lives at
 * x * ny + y. Construction validates nonnegativity and the unit sum.
 */
class JointDist {
public:
    JointDist(std::size_t nx, std::size_t ny, std::vector<double> weights);

    static JointDist uniform(std::size_t nx, std::size_t ny);
    static JointDist point_mass(std::size_t nx, std::size_t ny, std::size_t x, std::size_t y);
    /// Independent joint m(x) q(y).
    static JointDist product(const std::vector<double>& mx, const std::vector<double>& qy);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double operator()(std::size_t x, std::size_t y) const { return w_[x * ny_ + y]; }
    const std::vector<double>& weights() const { return w_; }

private:
    std::size_t nx_;
    std::size_t ny_;
    std::vector<double> w_;
};

/// Subset of X x Y, as a row-major membership mask.
class Event {
public:
    Event(std::size_t nx, std::size_t ny, std::vector<bool> mask);

    static Event full(std::size_t nx, std::size_t ny);
    /// {X = x}
    static Event observation(std::size_t nx, std::size_t ny, std::size_t x);
    /// {X in cell}
    static Event observation_set(std::size_t nx, std::size_t ny, const std::vector<std::size_t>& cell);
    /// {Y in outcomes}
    static Event outcome_set(std::size_t nx, std::size_t ny, const std::vector<std::size_t>& outcomes);

    Event intersect(const Event& other) const;

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    bool contains(std::size_t x, std::size_t y) const { return mask_[x * ny_ + y]; }

private:
    std::size_t nx_;
    std::size_t ny_;
    std::vector<bool> mask_;
};

/// Loss table L(y, a), row-major over Y x A. Entries must be finite.
class LossFn {
public:
    LossFn(std::size_t ny, std::size_t na, std::vector<double> table);

    /// L(y, a) = 0 if y == a else 1; requires |Y| == |A|.
    static LossFn zero_one(std::size_t n);

    std::size_t ny() const { return ny_; }
    std::size_t na() const { return na_; }
    double operator()(std::size_t y, std::size_t a) const { return t_[y * na_ + a]; }
    const std::vector<double>& table() const { return t_; }

    /// a * L + b
    LossFn affine(double scale, double shift) const;

private:
    std::size_t ny_;
    std::size_t na_;
    std::vector<double> t_;
};

/// Randomized decision rule: one distribution over actions per observation.
class DecisionRule {
public:
    DecisionRule(std::size_t nx, std::size_t na, std::vector<double> table);

    static DecisionRule deterministic(std::size_t na, const std::vector<std::size_t>& action_of_x);
    static DecisionRule uniform(std::size_t nx, std::size_t na);
    /// Same action distribution for every observation.
    static DecisionRule ignoring(std::size_t nx, const std::vector<double>& row);

    std::size_t nx() const { return nx_; }
    std::size_t na() const { return na_; }
    double operator()(std::size_t x, std::size_t a) const { return t_[x * na_ + a]; }
    std::vector<double> row(std::size_t x) const;
    DecisionRule with_row(std::size_t x, const std::vector<double>& row) const;
    const std::vector<double>& table() const { return t_; }

    bool ignores_information(double tol = 1e-9) const;
    /// Total-variation distance between the rows at x.
    double row_distance(const DecisionRule& other, std::size_t x) const;

private:
    std::size_t nx_;
    std::size_t na_;
    std::vector<double> t_;
};

std::vector<double> marginal_x(const JointDist& p);
std::vector<double> marginal_y(const JointDist& p);

/// Pr(E)
double probability(const JointDist& p, const Event& e);

/// Pr | E. Throws ZeroProbabilityError when Pr(E) <= kPositiveMass.
JointDist condition(const JointDist& p, const Event& e);

/// L_delta(x, y) = sum_a delta(x)(a) L(y, a), row-major over X x Y.
std::vector<double> loss_variable(const DecisionRule& rule, const LossFn& loss);

/// E_Pr[L_delta]
double expected_loss(const JointDist& p, const DecisionRule& rule, const LossFn& loss);

/// sum_y q(y) L(y, a) for every action a.
std::vector<double> action_losses(const std::vector<double>& qy, const LossFn& loss);

}  // namespace credo
