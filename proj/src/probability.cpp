#include "credo/probability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "credo/errors.hpp"

namespace credo {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* name) {
    if (labels.empty()) throw ValidationError(std::string("space: ") + name + " has no labels");
    if (labels.size() > kMaxLabels)
        throw ValidationError(std::string("space: ") + name + " has " + std::to_string(labels.size()) +
                              " labels, limit is " + std::to_string(kMaxLabels));
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw ValidationError(std::string("space: empty label in ") + name);
        if (!seen.insert(l).second) throw ValidationError(std::string("space: duplicate label '") + l + "' in " + name);
    }
}

std::size_t find_label(const std::vector<std::string>& labels, const std::string& label, const char* name) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ValidationError(std::string("unknown ") + name + " label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

// Clamps round-off negatives and checks the unit sum of one distribution.
void check_distribution(std::vector<double>::iterator first, std::vector<double>::iterator last, const char* what) {
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
        if (!std::isfinite(*it)) throw DimensionError(std::string(what) + ": non-finite weight");
        if (*it < 0.0) {
            if (*it < -kSumTol) throw DimensionError(std::string(what) + ": negative weight " + std::to_string(*it));
            *it = 0.0;
        }
        sum += *it;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw DimensionError(std::string(what) + ": weights sum to " + std::to_string(sum) + ", not 1");
}

}  // namespace

void SpaceSpec::validate() const {
    check_labels(x_labels, "X");
    check_labels(y_labels, "Y");
    check_labels(a_labels, "A");
}

std::size_t SpaceSpec::x_index(const std::string& label) const { return find_label(x_labels, label, "X"); }
std::size_t SpaceSpec::y_index(const std::string& label) const { return find_label(y_labels, label, "Y"); }
std::size_t SpaceSpec::a_index(const std::string& label) const { return find_label(a_labels, label, "A"); }

JointDist::JointDist(std::size_t nx, std::size_t ny, std::vector<double> weights)
    : nx_(nx), ny_(ny), w_(std::move(weights)) {
    if (nx == 0 || ny == 0 || w_.size() != nx * ny)
        throw DimensionError("joint distribution: expected " + std::to_string(nx * ny) + " weights, got " +
                             std::to_string(w_.size()));
    check_distribution(w_.begin(), w_.end(), "joint distribution");
}

JointDist JointDist::uniform(std::size_t nx, std::size_t ny) {
    return JointDist(nx, ny, std::vector<double>(nx * ny, 1.0 / static_cast<double>(nx * ny)));
}

JointDist JointDist::point_mass(std::size_t nx, std::size_t ny, std::size_t x, std::size_t y) {
    std::vector<double> w(nx * ny, 0.0);
    w.at(x * ny + y) = 1.0;
    return JointDist(nx, ny, std::move(w));
}

JointDist JointDist::product(const std::vector<double>& mx, const std::vector<double>& qy) {
    std::vector<double> w(mx.size() * qy.size());
    for (std::size_t x = 0; x < mx.size(); ++x)
        for (std::size_t y = 0; y < qy.size(); ++y) w[x * qy.size() + y] = mx[x] * qy[y];
    return JointDist(mx.size(), qy.size(), std::move(w));
}

Event::Event(std::size_t nx, std::size_t ny, std::vector<bool> mask) : nx_(nx), ny_(ny), mask_(std::move(mask)) {
    if (mask_.size() != nx * ny) throw DimensionError("event: mask size does not match the product space");
}

Event Event::full(std::size_t nx, std::size_t ny) { return Event(nx, ny, std::vector<bool>(nx * ny, true)); }

Event Event::observation(std::size_t nx, std::size_t ny, std::size_t x) { return observation_set(nx, ny, {x}); }

Event Event::observation_set(std::size_t nx, std::size_t ny, const std::vector<std::size_t>& cell) {
    std::vector<bool> m(nx * ny, false);
    for (auto x : cell) {
        if (x >= nx) throw DimensionError("event: observation index out of range");
        for (std::size_t y = 0; y < ny; ++y) m[x * ny + y] = true;
    }
    return Event(nx, ny, std::move(m));
}

Event Event::outcome_set(std::size_t nx, std::size_t ny, const std::vector<std::size_t>& outcomes) {
    std::vector<bool> m(nx * ny, false);
    for (auto y : outcomes) {
        if (y >= ny) throw DimensionError("event: outcome index out of range");
        for (std::size_t x = 0; x < nx; ++x) m[x * ny + y] = true;
    }
    return Event(nx, ny, std::move(m));
}

Event Event::intersect(const Event& other) const {
    if (other.nx_ != nx_ || other.ny_ != ny_) throw DimensionError("event: intersecting events on different spaces");
    std::vector<bool> m(mask_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] && other.mask_[i];
    return Event(nx_, ny_, std::move(m));
}

LossFn::LossFn(std::size_t ny, std::size_t na, std::vector<double> table) : ny_(ny), na_(na), t_(std::move(table)) {
    if (ny == 0 || na == 0 || t_.size() != ny * na)
        throw DimensionError("loss: expected " + std::to_string(ny * na) + " entries, got " + std::to_string(t_.size()));
    for (double v : t_)
        if (!std::isfinite(v)) throw DimensionError("loss: non-finite entry");
}

LossFn LossFn::zero_one(std::size_t n) {
    std::vector<double> t(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) t[i * n + i] = 0.0;
    return LossFn(n, n, std::move(t));
}

LossFn LossFn::affine(double scale, double shift) const {
    std::vector<double> t(t_);
    for (double& v : t) v = scale * v + shift;
    return LossFn(ny_, na_, std::move(t));
}

DecisionRule::DecisionRule(std::size_t nx, std::size_t na, std::vector<double> table)
    : nx_(nx), na_(na), t_(std::move(table)) {
    if (nx == 0 || na == 0 || t_.size() != nx * na)
        throw DimensionError("decision rule: expected " + std::to_string(nx * na) + " entries, got " +
                             std::to_string(t_.size()));
    for (std::size_t x = 0; x < nx; ++x) {
        auto first = t_.begin() + static_cast<std::ptrdiff_t>(x * na);
        check_distribution(first, first + static_cast<std::ptrdiff_t>(na), "decision rule row");
    }
}

DecisionRule DecisionRule::deterministic(std::size_t na, const std::vector<std::size_t>& action_of_x) {
    std::vector<double> t(action_of_x.size() * na, 0.0);
    for (std::size_t x = 0; x < action_of_x.size(); ++x) {
        if (action_of_x[x] >= na) throw DimensionError("decision rule: action index out of range");
        t[x * na + action_of_x[x]] = 1.0;
    }
    return DecisionRule(action_of_x.size(), na, std::move(t));
}

DecisionRule DecisionRule::uniform(std::size_t nx, std::size_t na) {
    return DecisionRule(nx, na, std::vector<double>(nx * na, 1.0 / static_cast<double>(na)));
}

DecisionRule DecisionRule::ignoring(std::size_t nx, const std::vector<double>& row) {
    std::vector<double> t;
    t.reserve(nx * row.size());
    for (std::size_t x = 0; x < nx; ++x) t.insert(t.end(), row.begin(), row.end());
    return DecisionRule(nx, row.size(), std::move(t));
}

std::vector<double> DecisionRule::row(std::size_t x) const {
    auto first = t_.begin() + static_cast<std::ptrdiff_t>(x * na_);
    return {first, first + static_cast<std::ptrdiff_t>(na_)};
}

DecisionRule DecisionRule::with_row(std::size_t x, const std::vector<double>& row) const {
    if (row.size() != na_) throw DimensionError("decision rule: replacement row has the wrong width");
    std::vector<double> t(t_);
    std::copy(row.begin(), row.end(), t.begin() + static_cast<std::ptrdiff_t>(x * na_));
    return DecisionRule(nx_, na_, std::move(t));
}

bool DecisionRule::ignores_information(double tol) const {
    for (std::size_t x = 1; x < nx_; ++x)
        for (std::size_t a = 0; a < na_; ++a)
            if (std::abs((*this)(x, a) - (*this)(0, a)) > tol) return false;
    return true;
}

double DecisionRule::row_distance(const DecisionRule& other, std::size_t x) const {
    if (other.na_ != na_) throw DimensionError("decision rule: comparing rules over different action sets");
    double d = 0.0;
    for (std::size_t a = 0; a < na_; ++a) d += std::abs((*this)(x, a) - other(x, a));
    return 0.5 * d;
}

std::vector<double> marginal_x(const JointDist& p) {
    std::vector<double> m(p.nx(), 0.0);
    for (std::size_t x = 0; x < p.nx(); ++x)
        for (std::size_t y = 0; y < p.ny(); ++y) m[x] += p(x, y);
    return m;
}

std::vector<double> marginal_y(const JointDist& p) {
    std::vector<double> m(p.ny(), 0.0);
    for (std::size_t x = 0; x < p.nx(); ++x)
        for (std::size_t y = 0; y < p.ny(); ++y) m[y] += p(x, y);
    return m;
}

double probability(const JointDist& p, const Event& e) {
    if (e.nx() != p.nx() || e.ny() != p.ny()) throw DimensionError("event and distribution live on different spaces");
    double s = 0.0;
    for (std::size_t x = 0; x < p.nx(); ++x)
        for (std::size_t y = 0; y < p.ny(); ++y)
            if (e.contains(x, y)) s += p(x, y);
    return s;
}

JointDist condition(const JointDist& p, const Event& e) {
    const double mass = probability(p, e);
    if (mass <= kPositiveMass)
        throw ZeroProbabilityError("conditioning on an event of probability " + std::to_string(mass));
    std::vector<double> w(p.weights().size(), 0.0);
    for (std::size_t x = 0; x < p.nx(); ++x)
        for (std::size_t y = 0; y < p.ny(); ++y)
            if (e.contains(x, y)) w[x * p.ny() + y] = p(x, y) / mass;
    return JointDist(p.nx(), p.ny(), std::move(w));
}

std::vector<double> loss_variable(const DecisionRule& rule, const LossFn& loss) {
    if (rule.na() != loss.na()) throw DimensionError("rule and loss disagree on the number of actions");
    std::vector<double> lv(rule.nx() * loss.ny(), 0.0);
    for (std::size_t x = 0; x < rule.nx(); ++x)
        for (std::size_t y = 0; y < loss.ny(); ++y) {
            double s = 0.0;
            for (std::size_t a = 0; a < rule.na(); ++a) s += rule(x, a) * loss(y, a);
            lv[x * loss.ny() + y] = s;
        }
    return lv;
}

double expected_loss(const JointDist& p, const DecisionRule& rule, const LossFn& loss) {
    if (p.nx() != rule.nx() || p.ny() != loss.ny())
        throw DimensionError("expected loss: distribution, rule and loss dimensions disagree");
    const auto lv = loss_variable(rule, loss);
    return std::inner_product(lv.begin(), lv.end(), p.weights().begin(), 0.0);
}

std::vector<double> action_losses(const std::vector<double>& qy, const LossFn& loss) {
    if (qy.size() != loss.ny()) throw DimensionError("action losses: distribution over Y has the wrong size");
    std::vector<double> out(loss.na(), 0.0);
    for (std::size_t a = 0; a < loss.na(); ++a)
        for (std::size_t y = 0; y < loss.ny(); ++y) out[a] += qy[y] * loss(y, a);
    return out;
}

}  // namespace credo
