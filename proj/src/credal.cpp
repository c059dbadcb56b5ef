#include "credo/credal.hpp"

#include <algorithm>
#include <string>

#include "credo/errors.hpp"

namespace credo {

using numerics::hull_distance;
using numerics::irredundant_points;

DistributionSet DistributionSet::hull_of(std::size_t dim, std::vector<Point> points) {
    if (points.empty()) throw EmptySetError("distribution set: no points");
    for (const auto& p : points)
        if (p.size() != dim) throw DimensionError("distribution set: point of wrong dimension");
    return DistributionSet(dim, irredundant_points(std::move(points)));
}

DistributionSet DistributionSet::simplex(std::size_t dim) {
    std::vector<Point> corners(dim, Point(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) corners[i][i] = 1.0;
    return DistributionSet(dim, std::move(corners));
}

bool DistributionSet::contains(const Point& p, double tol) const { return numerics::polytope_contains(vertices_, p, tol); }

bool subset(const DistributionSet& a, const DistributionSet& b, double tol) {
    if (a.dim() != b.dim()) throw DimensionError("distribution sets over different spaces");
    return numerics::hull_subset(a.vertices(), b.vertices(), tol);
}

bool equal(const DistributionSet& a, const DistributionSet& b, double tol) {
    return subset(a, b, tol) && subset(b, a, tol);
}

CredalSet CredalSet::from_vertices(std::size_t nx, std::size_t ny, const std::vector<JointDist>& points) {
    if (points.empty()) throw EmptySetError("credal set: no vertices");
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (p.nx() != nx || p.ny() != ny) throw DimensionError("credal set: vertex on a different product space");
        pts.push_back(p.weights());
    }
    return CredalSet(nx, ny, irredundant_points(std::move(pts)));
}

CredalSet CredalSet::from_extreme_points(std::size_t nx, std::size_t ny, std::vector<Point> points) {
    if (points.empty()) throw EmptySetError("credal set: no vertices");
    for (auto& p : points) p = JointDist(nx, ny, std::move(p)).weights();
    return CredalSet(nx, ny, numerics::dedupe_points(std::move(points)));
}

CredalSet CredalSet::from_constraints(const SpaceSpec& space, const numerics::LinearConstraints& constraints) {
    space.validate();
    const std::size_t dim = space.nx() * space.ny();
    if (constraints.dim != dim)
        throw DimensionError("credal constraints have dimension " + std::to_string(constraints.dim) + ", expected " +
                             std::to_string(dim));
    auto pts = numerics::enumerate_vertices(constraints);
    CredalSet out = from_extreme_points(space.nx(), space.ny(), std::move(pts));
    out.origin_ = constraints;
    return out;
}

CredalSet CredalSet::simplex(std::size_t nx, std::size_t ny) {
    return from_extreme_points(nx, ny, DistributionSet::simplex(nx * ny).vertices());
}

CredalSet CredalSet::singleton(const JointDist& p) { return CredalSet(p.nx(), p.ny(), {p.weights()}); }

std::vector<JointDist> CredalSet::vertices() const {
    std::vector<JointDist> out;
    out.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) out.push_back(vertex(i));
    return out;
}

bool CredalSet::contains(const JointDist& p, double tol) const {
    return numerics::polytope_contains(points_, p.weights(), tol);
}

bool can_condition(const CredalSet& p, const Event& e) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (probability(p.vertex(i), e) > kPositiveMass) return true;
    return false;
}

bool conditioning_drops_vertices(const CredalSet& p, const Event& e) {
    bool kept = false;
    bool dropped = false;
    for (std::size_t i = 0; i < p.size(); ++i) (probability(p.vertex(i), e) > kPositiveMass ? kept : dropped) = true;
    return kept && dropped;
}

CredalSet credal_condition(const CredalSet& p, const Event& e) {
    std::vector<JointDist> images;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const JointDist v = p.vertex(i);
        if (probability(v, e) > kPositiveMass) images.push_back(condition(v, e));
    }
    if (images.empty()) throw EmptySetError("conditioning: no distribution in the set gives the event positive probability");
    return CredalSet::from_vertices(p.nx(), p.ny(), images);
}

DistributionSet credal_marginal_x(const CredalSet& p) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(marginal_x(p.vertex(i)));
    return DistributionSet::hull_of(p.nx(), std::move(pts));
}

DistributionSet credal_marginal_y(const CredalSet& p) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(marginal_y(p.vertex(i)));
    return DistributionSet::hull_of(p.ny(), std::move(pts));
}

HullSet build_hull(const CredalSet& p) {
    const std::size_t nx = p.nx();
    const std::size_t ny = p.ny();
    const DistributionSet px = credal_marginal_x(p);

    std::vector<std::vector<Point>> cond(nx);
    double combos = static_cast<double>(px.size());
    for (std::size_t x = 0; x < nx; ++x) {
        const Event ex = Event::observation(nx, ny, x);
        if (!can_condition(p, ex)) continue;
        cond[x] = credal_marginal_y(credal_condition(p, ex)).vertices();
        combos *= static_cast<double>(cond[x].size());
    }
    if (combos > static_cast<double>(kMaxHullCombinations))
        throw SizeLimitError("hull construction: " + std::to_string(static_cast<long long>(combos)) +
                             " candidate combinations exceed the limit of " + std::to_string(kMaxHullCombinations));

    // Every combination m(x) c_x(y) with m a vertex of P_X and each c_x a
    // vertex of (P | X = x)_Y is extreme in ⟨P⟩, so deduplication suffices.
    std::vector<Point> candidates;
    for (const Point& m : px.vertices()) {
        std::vector<std::size_t> radix(nx, 1);
        for (std::size_t x = 0; x < nx; ++x)
            if (m[x] > kPositiveMass && !cond[x].empty()) radix[x] = cond[x].size();
        std::vector<std::size_t> idx(nx, 0);
        for (;;) {
            Point w(nx * ny, 0.0);
            for (std::size_t x = 0; x < nx; ++x) {
                if (m[x] <= kPositiveMass || cond[x].empty()) continue;
                for (std::size_t y = 0; y < ny; ++y) w[x * ny + y] = m[x] * cond[x][idx[x]][y];
            }
            double total = 0.0;
            for (double v : w) total += v;
            for (double& v : w) v /= total;
            candidates.push_back(std::move(w));

            std::size_t d = 0;
            while (d < nx && ++idx[d] == radix[d]) idx[d++] = 0;
            if (d == nx) break;
        }
    }
    return CredalSet::from_extreme_points(nx, ny, std::move(candidates));
}

bool credal_subset(const CredalSet& a, const CredalSet& b, double tol) {
    if (a.nx() != b.nx() || a.ny() != b.ny()) throw DimensionError("credal sets on different product spaces");
    return numerics::hull_subset(a.points(), b.points(), tol);
}

bool credal_equal(const CredalSet& a, const CredalSet& b, double tol) {
    return credal_subset(a, b, tol) && credal_subset(b, a, tol);
}

bool DilationReport::any() const {
    return std::any_of(entries.begin(), entries.end(), [](const DilationEntry& e) { return e.dilation; });
}

DilationReport detect_dilation(const CredalSet& p) {
    DilationReport report;
    report.prior_y = credal_marginal_y(p);
    for (std::size_t x = 0; x < p.nx(); ++x) {
        DilationEntry entry;
        entry.x = x;
        const Event ex = Event::observation(p.nx(), p.ny(), x);
        if (can_condition(p, ex)) {
            entry.defined = true;
            entry.conditional_y = credal_marginal_y(credal_condition(p, ex));
            entry.covers_prior = subset(report.prior_y, entry.conditional_y);
            entry.strictly_larger = std::any_of(
                entry.conditional_y.vertices().begin(), entry.conditional_y.vertices().end(),
                [&](const Point& v) { return hull_distance(report.prior_y.vertices(), v) > kStrictTol; });
            entry.dilation = entry.covers_prior && entry.strictly_larger;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace credo
