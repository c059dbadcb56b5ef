#include "credo/numerics/polytope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "credo/errors.hpp"

namespace credo::numerics {

void LinearConstraints::add_eq(Vec row, double rhs) {
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearConstraints::add_le(Vec row, double rhs) {
    le_rows.push_back(std::move(row));
    le_rhs.push_back(rhs);
}

void LinearConstraints::add_ge(Vec row, double rhs) {
    for (double& v : row) v = -v;
    add_le(std::move(row), -rhs);
}

double LinearConstraints::violation(const Point& x) const {
    double worst = 0.0;
    auto dot = [&x](const Vec& row) {
        double s = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
        return s;
    };
    for (std::size_t i = 0; i < eq_rows.size(); ++i) worst = std::max(worst, std::abs(dot(eq_rows[i]) - eq_rhs[i]));
    for (std::size_t i = 0; i < le_rows.size(); ++i) worst = std::max(worst, dot(le_rows[i]) - le_rhs[i]);
    return worst;
}

void LinearConstraints::validate() const {
    if (dim == 0) throw DimensionError("constraint system has dimension 0");
    if (eq_rows.size() != eq_rhs.size() || le_rows.size() != le_rhs.size())
        throw DimensionError("constraint system: row count and right-hand side count differ");
    for (const auto& r : eq_rows)
        if (r.size() != dim) throw DimensionError("constraint system: equality row of wrong width");
    for (const auto& r : le_rows)
        if (r.size() != dim) throw DimensionError("constraint system: inequality row of wrong width");
}

namespace {

// Zero set of a ray over the rows of the homogenized system.
class RowSet {
public:
    explicit RowSet(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }

    RowSet intersect(const RowSet& o) const {
        RowSet r;
        r.words_.resize(words_.size());
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
        return r;
    }

    bool contains(const RowSet& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if ((o.words_[w] & ~words_[w]) != 0) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Ray {
    Eigen::VectorXd w;
    RowSet zeros;
};

constexpr double kRayTol = 1e-9;

Eigen::VectorXd normalized(const Eigen::VectorXd& v) { return v / v.norm(); }

// Greedy choice of linearly independent rows, in index order.
std::vector<std::size_t> independent_rows(const std::vector<Eigen::VectorXd>& rows, Eigen::Index dim) {
    std::vector<std::size_t> chosen;
    std::vector<Eigen::VectorXd> basis;
    for (std::size_t i = 0; i < rows.size() && static_cast<Eigen::Index>(basis.size()) < dim; ++i) {
        Eigen::VectorXd r = rows[i];
        for (const auto& b : basis) r -= r.dot(b) * b;
        if (r.norm() > 1e-8) {
            basis.push_back(r.normalized());
            chosen.push_back(i);
        }
    }
    return chosen;
}

// Snaps an approximate vertex onto the intersection of its active constraints.
Point polish(const LinearConstraints& c, const Point& x) {
    std::vector<const Vec*> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < c.eq_rows.size(); ++i) {
        rows.push_back(&c.eq_rows[i]);
        rhs.push_back(c.eq_rhs[i]);
    }
    for (std::size_t i = 0; i < c.le_rows.size(); ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < c.dim; ++j) ax += c.le_rows[i][j] * x[j];
        if (std::abs(ax - c.le_rhs[i]) <= 1e-7) {
            rows.push_back(&c.le_rows[i]);
            rhs.push_back(c.le_rhs[i]);
        }
    }
    const auto d = static_cast<Eigen::Index>(c.dim);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) a(static_cast<Eigen::Index>(i), j) = (*rows[i])[static_cast<std::size_t>(j)];
        b(static_cast<Eigen::Index>(i)) = rhs[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < d) return x;
    const Eigen::VectorXd sol = qr.solve(b);
    Point out(c.dim);
    double moved = 0.0;
    for (std::size_t j = 0; j < c.dim; ++j) {
        out[j] = std::abs(sol(static_cast<Eigen::Index>(j))) < 1e-15 ? 0.0 : sol(static_cast<Eigen::Index>(j));
        moved = std::max(moved, std::abs(out[j] - x[j]));
    }
    if (moved > 1e-6 || c.violation(out) > c.violation(x)) return x;
    return out;
}

}  // namespace

std::vector<Point> enumerate_polytope_vertices(const LinearConstraints& c) {
    c.validate();
    if (c.dim > kMaxEnumerationDim)
        throw SizeLimitError("vertex enumeration: dimension " + std::to_string(c.dim) + " exceeds the limit of " +
                             std::to_string(kMaxEnumerationDim));
    const auto d = static_cast<Eigen::Index>(c.dim);

    // A feasible point anchors the affine hull of the equalities.
    LinearProgram feas(c.dim);
    for (std::size_t j = 0; j < c.dim; ++j) feas.set_free(j);
    feas.eq_rows = c.eq_rows;
    feas.eq_rhs = c.eq_rhs;
    feas.le_rows = c.le_rows;
    feas.le_rhs = c.le_rhs;
    const LpSolution fs = solve_lp(feas);
    if (fs.status != LpStatus::optimal) throw EmptySetError("vertex enumeration: constraint system is infeasible");
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(fs.primal.data(), d);

    Eigen::MatrixXd null_basis;
    if (c.eq_rows.empty()) {
        null_basis = Eigen::MatrixXd::Identity(d, d);
    } else {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(c.eq_rows.size()), d);
        for (std::size_t i = 0; i < c.eq_rows.size(); ++i)
            for (Eigen::Index j = 0; j < d; ++j) a(static_cast<Eigen::Index>(i), j) = c.eq_rows[i][static_cast<std::size_t>(j)];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++rank;
        null_basis = svd.matrixV().rightCols(d - rank);
    }
    const Eigen::Index k = null_basis.cols();

    std::vector<Point> found;
    if (k == 0) {
        found.emplace_back(fs.primal);
    } else {
        // Homogenized rows m.(z, t) >= 0 for x = x0 + N z / t.
        std::vector<Eigen::VectorXd> rows;
        for (std::size_t i = 0; i < c.le_rows.size(); ++i) {
            const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(c.le_rows[i].data(), d);
            const Eigen::VectorXd g = null_basis.transpose() * a;
            const double h = c.le_rhs[i] - a.dot(x0);
            if (g.norm() <= 1e-12) continue;  // constant on the affine hull, satisfied at x0
            Eigen::VectorXd row(k + 1);
            row.head(k) = -g;
            row(k) = h;
            rows.push_back(normalized(row));
        }
        Eigen::VectorXd t_row = Eigen::VectorXd::Zero(k + 1);
        t_row(k) = 1.0;
        rows.push_back(t_row);

        const auto initial = independent_rows(rows, k + 1);
        if (static_cast<Eigen::Index>(initial.size()) < k + 1)
            throw UnboundedError("vertex enumeration: polytope is unbounded");

        Eigen::MatrixXd m0(k + 1, k + 1);
        for (Eigen::Index i = 0; i <= k; ++i) m0.row(i) = rows[initial[static_cast<std::size_t>(i)]].transpose();
        const Eigen::MatrixXd inv = m0.inverse();

        std::vector<char> added(rows.size(), 0);
        for (auto i : initial) added[i] = 1;
        std::vector<Ray> rays;
        for (Eigen::Index col = 0; col <= k; ++col) {
            Ray r{normalized(inv.col(col)), RowSet(rows.size())};
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (added[i] && std::abs(rows[i].dot(r.w)) <= kRayTol) r.zeros.set(i);
            rays.push_back(std::move(r));
        }

        for (std::size_t row_idx = 0; row_idx < rows.size(); ++row_idx) {
            if (added[row_idx]) continue;
            added[row_idx] = 1;
            const Eigen::VectorXd& a = rows[row_idx];
            std::vector<double> s(rays.size());
            std::vector<std::size_t> pos, neg;
            std::vector<Ray> next;
            for (std::size_t r = 0; r < rays.size(); ++r) {
                s[r] = a.dot(rays[r].w);
                if (s[r] > kRayTol) {
                    pos.push_back(r);
                    next.push_back(rays[r]);
                } else if (s[r] < -kRayTol) {
                    neg.push_back(r);
                } else {
                    Ray z = rays[r];
                    z.zeros.set(row_idx);
                    next.push_back(std::move(z));
                }
            }
            for (auto p : pos) {
                for (auto n : neg) {
                    const RowSet common = rays[p].zeros.intersect(rays[n].zeros);
                    if (static_cast<Eigen::Index>(common.count()) < k - 1) continue;
                    bool adjacent = true;
                    for (std::size_t o = 0; o < rays.size() && adjacent; ++o)
                        if (o != p && o != n && rays[o].zeros.contains(common)) adjacent = false;
                    if (!adjacent) continue;
                    Ray fresh{normalized(s[p] * rays[n].w - s[n] * rays[p].w), common};
                    fresh.zeros.set(row_idx);
                    next.push_back(std::move(fresh));
                }
            }
            rays = std::move(next);
        }

        for (const auto& r : rays) {
            const double t = r.w(k);
            if (t <= kRayTol) throw UnboundedError("vertex enumeration: polytope has a recession direction");
            const Eigen::VectorXd x = x0 + null_basis * (r.w.head(k) / t);
            found.emplace_back(x.data(), x.data() + d);
        }
    }

    for (auto& p : found) p = polish(c, p);
    found = dedupe_points(std::move(found));
    std::sort(found.begin(), found.end());
    for (const auto& p : found)
        if (c.violation(p) > 1e-9)
            throw NumericalError("vertex enumeration: vertex violates the constraints by " +
                                 std::to_string(c.violation(p)));
    return found;
}

std::vector<Point> enumerate_vertices(const LinearConstraints& constraints) {
    constraints.validate();
    LinearConstraints full = constraints;
    full.add_eq(Vec(full.dim, 1.0), 1.0);
    for (std::size_t j = 0; j < full.dim; ++j) {
        Vec row(full.dim, 0.0);
        row[j] = -1.0;
        full.add_le(std::move(row), 0.0);
    }
    return enumerate_polytope_vertices(full);
}

double hull_distance(const std::vector<Point>& vertices, const Point& query) {
    if (vertices.empty()) throw DimensionError("hull membership: empty vertex list");
    const std::size_t d = query.size();
    for (const auto& v : vertices)
        if (v.size() != d) throw DimensionError("hull membership: vertex and query dimensions differ");
    const std::size_t n = vertices.size();

    // min t  s.t.  |sum_j lambda_j v_j - q|_inf <= t,  lambda in the simplex.
    LinearProgram lp(n + 1);
    lp.objective[n] = 1.0;
    Vec sum(n + 1, 1.0);
    sum[n] = 0.0;
    lp.add_eq(std::move(sum), 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        Vec up(n + 1), down(n + 1);
        for (std::size_t j = 0; j < n; ++j) {
            up[j] = vertices[j][i];
            down[j] = -vertices[j][i];
        }
        up[n] = -1.0;
        down[n] = -1.0;
        lp.add_le(std::move(up), query[i]);
        lp.add_le(std::move(down), -query[i]);
    }
    const LpSolution sol = solve_lp(lp);
    if (!sol.optimal()) throw NumericalError("hull membership: distance LP not optimal");
    return std::max(sol.objective, 0.0);
}

bool polytope_contains(const std::vector<Point>& vertices, const Point& query, double tol) {
    return hull_distance(vertices, query) <= tol;
}

std::vector<Point> dedupe_points(std::vector<Point> points, double tol) {
    std::vector<Point> kept;
    std::multimap<double, std::size_t> by_first;
    for (auto& p : points) {
        const double key = p.empty() ? 0.0 : p[0];
        bool dup = false;
        for (auto it = by_first.lower_bound(key - tol); it != by_first.end() && it->first <= key + tol; ++it) {
            const Point& q = kept[it->second];
            double dist = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) dist = std::max(dist, std::abs(p[i] - q[i]));
            if (dist <= tol) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        by_first.emplace(key, kept.size());
        kept.push_back(std::move(p));
    }
    return kept;
}

std::vector<Point> irredundant_points(std::vector<Point> points) {
    points = dedupe_points(std::move(points));
    std::size_t i = 0;
    while (i < points.size() && points.size() > 1) {
        std::vector<Point> others;
        others.reserve(points.size() - 1);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) others.push_back(points[j]);
        if (polytope_contains(others, points[i]))
            points.erase(points.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return points;
}

bool hull_subset(const std::vector<Point>& a, const std::vector<Point>& b, double tol) {
    return std::all_of(a.begin(), a.end(), [&](const Point& p) { return polytope_contains(b, p, tol); });
}

}  // namespace credo::numerics
