#pragma once

#include <cstddef>
#include <vector>

#include "credo/numerics/lp.hpp"

namespace credo::numerics {

using Point = std::vector<double>;

/// Hard cap on the ambient dimension of vertex enumeration.
inline constexpr std::size_t kMaxEnumerationDim = 16;

/// Points closer than this in the max-norm are the same vertex.
inline constexpr double kVertexDedupTol = 1e-9;

/// Default residual for hull membership.
inline constexpr double kMembershipTol = 1e-8;

/// Linear constraints over R^dim: eq_rows x = eq_rhs, le_rows x <= le_rhs.
struct LinearConstraints {
    std::size_t dim = 0;
    std::vector<Vec> eq_rows;
    Vec eq_rhs;
    std::vector<Vec> le_rows;
    Vec le_rhs;

    LinearConstraints() = default;
    explicit LinearConstraints(std::size_t d) : dim(d) {}

    void add_eq(Vec row, double rhs);
    void add_le(Vec row, double rhs);
    void add_ge(Vec row, double rhs);

    /// Largest violation of any constraint at x (0 when satisfied).
    double violation(const Point& x) const;
    void validate() const;
};

/**
 * All extreme points of the bounded polytope described by `c`, by the double
 * description method on the homogenized cone of the inequality system
 * restricted to the affine hull of the equalities. Output is deduplicated at
 * kVertexDedupTol and sorted lexicographically.
 *
 * Throws SizeLimitError if c.dim > kMaxEnumerationDim, EmptySetError if the
 * system is infeasible, UnboundedError if the polytope is unbounded.
 */
std::vector<Point> enumerate_polytope_vertices(const LinearConstraints& c);

/// Vertices of {x in the probability simplex of R^dim : constraints}. The
/// simplex constraints (sum 1, x >= 0) are implied and need not be passed.
std::vector<Point> enumerate_vertices(const LinearConstraints& constraints);

/// Smallest max-norm distance from `query` to conv(vertices), via LP.
double hull_distance(const std::vector<Point>& vertices, const Point& query);

/// True iff query is a convex combination of vertices within `tol`.
bool polytope_contains(const std::vector<Point>& vertices, const Point& query, double tol = kMembershipTol);

/// Removes points within kVertexDedupTol of an earlier point; keeps order.
std::vector<Point> dedupe_points(std::vector<Point> points, double tol = kVertexDedupTol);

/// Reduces a point list to the extreme points of its convex hull: duplicates
/// go first, then every point inside the hull of the remaining ones (within
/// kMembershipTol) is dropped. Order of survivors is preserved.
std::vector<Point> irredundant_points(std::vector<Point> points);

/// conv(a) is contained in conv(b).
bool hull_subset(const std::vector<Point>& a, const std::vector<Point>& b, double tol = kMembershipTol);

}  // namespace credo::numerics
