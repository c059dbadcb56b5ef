#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "credo/numerics/polytope.hpp"
#include "credo/probability.hpp"

namespace credo {

using numerics::Point;

/// Cap on the number of candidate points assembled by build_hull.
inline constexpr std::size_t kMaxHullCombinations = 1'000'000;

/// Residual above which a point counts as outside a set in strictness tests.
inline constexpr double kStrictTol = 1e-7;

/**
 * Closed convex set of distributions on one finite space, held as the
 * irredundant list of its extreme points. Used for marginal sets P_X, P_Y
 * and for the Y-parts of conditional sets.
 */
class DistributionSet {
public:
    /// Hull of `points`, reduced to extreme points.
    static DistributionSet hull_of(std::size_t dim, std::vector<Point> points);
    /// Whole simplex over `dim` outcomes.
    static DistributionSet simplex(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool is_point() const { return vertices_.size() == 1; }

    bool contains(const Point& p, double tol = numerics::kMembershipTol) const;

private:
    DistributionSet(std::size_t dim, std::vector<Point> vertices) : dim_(dim), vertices_(std::move(vertices)) {}

    std::size_t dim_;
    std::vector<Point> vertices_;
};

bool subset(const DistributionSet& a, const DistributionSet& b, double tol = numerics::kMembershipTol);
bool equal(const DistributionSet& a, const DistributionSet& b, double tol = numerics::kMembershipTol);

/**
 * Credal set P: closed convex set of joint distributions on X x Y, as the
 * hull of an irredundant vertex list. Nonconvex inputs are represented by
 * their convex hull; minimax values are unchanged because expected loss is
 * linear in the distribution.
 *
 * When built from constraints, the constraint system (over row-major X x Y
 * weights, simplex constraints implied) is kept as `origin` for reporting.
 */
class CredalSet {
public:
    /// Hull of arbitrary joints; redundant points are removed.
    static CredalSet from_vertices(std::size_t nx, std::size_t ny, const std::vector<JointDist>& points);
    /// Skips the redundancy pass; callers guarantee every point is extreme.
    static CredalSet from_extreme_points(std::size_t nx, std::size_t ny, std::vector<Point> points);
    /// Vertices of {Pr in Delta(X x Y) : constraints}. Throws EmptySetError,
    /// SizeLimitError (|X||Y| > 16).
    static CredalSet from_constraints(const SpaceSpec& space, const numerics::LinearConstraints& constraints);
    static CredalSet simplex(std::size_t nx, std::size_t ny);
    static CredalSet singleton(const JointDist& p);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t size() const { return points_.size(); }
    JointDist vertex(std::size_t i) const { return JointDist(nx_, ny_, points_[i]); }
    std::vector<JointDist> vertices() const;
    const std::vector<Point>& points() const { return points_; }
    const std::optional<numerics::LinearConstraints>& origin() const { return origin_; }

    bool contains(const JointDist& p, double tol = numerics::kMembershipTol) const;

private:
    CredalSet(std::size_t nx, std::size_t ny, std::vector<Point> points)
        : nx_(nx), ny_(ny), points_(std::move(points)) {}

    std::size_t nx_;
    std::size_t ny_;
    std::vector<Point> points_;
    std::optional<numerics::LinearConstraints> origin_;
};

/// Hull of the ⟨P⟩ construction; same representation as a credal set.
using HullSet = CredalSet;

/// True when conditioning on e keeps only some of the vertices, so the
/// returned conditional set is the closure of P | E.
bool conditioning_drops_vertices(const CredalSet& p, const Event& e);

/// Some vertex gives e probability above kPositiveMass.
bool can_condition(const CredalSet& p, const Event& e);

/// P | E as the hull of the conditioned vertices with Pr(E) > kPositiveMass.
/// Throws EmptySetError when no vertex gives e positive probability.
CredalSet credal_condition(const CredalSet& p, const Event& e);

DistributionSet credal_marginal_x(const CredalSet& p);
DistributionSet credal_marginal_y(const CredalSet& p);

/// ⟨P⟩: joints whose X-marginal lies in P_X and whose conditional at every x
/// lies in P | X = x (for x with P | X = x nonempty).
HullSet build_hull(const CredalSet& p);

bool credal_subset(const CredalSet& a, const CredalSet& b, double tol = numerics::kMembershipTol);
bool credal_equal(const CredalSet& a, const CredalSet& b, double tol = numerics::kMembershipTol);

struct DilationEntry {
    std::size_t x = 0;
    bool defined = false;         // P | X = x nonempty
    bool covers_prior = false;    // (P | X = x)_Y contains P_Y
    bool strictly_larger = false; // some conditional vertex lies outside P_Y
    bool dilation = false;        // covers_prior && strictly_larger
    DistributionSet conditional_y = DistributionSet::simplex(1);
};

struct DilationReport {
    DistributionSet prior_y = DistributionSet::simplex(1);
    std::vector<DilationEntry> entries;

    bool any() const;
};

DilationReport detect_dilation(const CredalSet& p);

}  // namespace credo
