#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "credo/credal.hpp"
#include "credo/probability.hpp"

namespace credo {

/// Largest |X| for which every partition is enumerated (Bell(6) = 203).
inline constexpr std::size_t kMaxPartitionSpace = 6;

/// Partition of the observation indices 0..nx-1. Kept canonical: each cell
/// sorted, cells ordered by their smallest element.
class Partition {
public:
    /// Throws ValidationError unless the cells are nonempty, disjoint and cover X.
    Partition(std::size_t nx, std::vector<std::vector<std::size_t>> cells);

    static Partition singletons(std::size_t nx);
    static Partition whole(std::size_t nx);

    std::size_t nx() const { return nx_; }
    const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }
    std::size_t cell_index(std::size_t x) const { return cell_of_[x]; }
    /// C(x)
    const std::vector<std::size_t>& cell_of(std::size_t x) const { return cells_[cell_of_[x]]; }

    /// "a,b;c" using the given labels.
    std::string format(const std::vector<std::string>& labels) const;

    bool operator==(const Partition& other) const { return cells_ == other.cells_; }

private:
    std::size_t nx_;
    std::vector<std::vector<std::size_t>> cells_;
    std::vector<std::size_t> cell_of_;
};

/// Every partition of nx elements in restricted-growth-string order.
/// Throws SizeLimitError when nx > kMaxPartitionSpace.
std::vector<Partition> all_partitions(std::size_t nx);

enum class Provenance { c_conditioning, external };

/// The values Pi(P, x) of an update rule at one P. An entry is nullopt where
/// the rule is undefined (the conditioning cell has zero mass under all of P).
struct UpdateRuleTable {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<std::optional<CredalSet>> entries;
    Provenance provenance = Provenance::external;
    std::optional<Partition> partition;  // set for C-conditioning

    static UpdateRuleTable external(std::size_t nx, std::size_t ny, std::vector<std::optional<CredalSet>> entries);
    bool defined(std::size_t x) const { return entries[x].has_value(); }
};

/// Pi(P, x) = P | X in C(x).
UpdateRuleTable c_conditioning(const CredalSet& p, const Partition& c);

/// At each defined x, the minimax randomized action against the entry's
/// Y-marginal set (even tie-break); uniform rows elsewhere.
DecisionRule rule_from_update(const UpdateRuleTable& table, const LossFn& loss);

struct RangeClass {
    DistributionSet range;           // R: the Y-marginal set announced
    std::vector<std::size_t> cells;  // X_R
};

struct CalibrationViolation {
    std::size_t vertex;
    std::size_t range_class;
    double residual;  // distance of the conditional Y-marginal from R
};

struct SkippedCheck {
    std::size_t vertex;
    std::size_t range_class;
};

struct CalibrationReport {
    std::vector<RangeClass> classes;
    std::vector<CalibrationViolation> violations;
    /// Vertex/class pairs not tested because the vertex gives X_R zero mass.
    std::vector<SkippedCheck> skipped;
    /// Observations where the table is undefined.
    std::vector<std::size_t> undefined;

    bool calibrated() const { return violations.empty(); }
};

/// Groups observations by equal entry Y-marginal sets (within 1e-8) and
/// tests every credal vertex's conditional Y-marginal given X in X_R against R.
CalibrationReport check_calibration(const CredalSet& p, const UpdateRuleTable& table, double tol = 1e-6);

enum class Narrowness { narrower, wider, equal, incomparable };

/// Pointwise inclusion of entries. Tables defined on different observation
/// sets are incomparable.
Narrowness compare_narrowness(const UpdateRuleTable& first, const UpdateRuleTable& second);

struct SharpCandidate {
    Partition partition;
    UpdateRuleTable table;
};

struct SharpSearchResult {
    std::vector<SharpCandidate> candidates;
    /// relation[i][j] = compare_narrowness(candidates[i], candidates[j])
    std::vector<std::vector<Narrowness>> relation;
    /// Candidates with no strictly narrower competitor.
    std::vector<std::size_t> minimal;
};

/// C-conditioning over every partition of X, reduced to its narrowness-minimal
/// tables. Throws SizeLimitError when |X| > kMaxPartitionSpace.
SharpSearchResult sharp_search(const CredalSet& p);

const char* to_string(Narrowness n);
const char* to_string(Provenance p);

}  // namespace credo
