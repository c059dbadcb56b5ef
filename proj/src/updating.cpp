#include "credo/updating.hpp"

#include <algorithm>
#include <string>

#include "credo/decision.hpp"
#include "credo/errors.hpp"

namespace credo {

namespace {

constexpr double kClassTol = 1e-8;

}  // namespace

Partition::Partition(std::size_t nx, std::vector<std::vector<std::size_t>> cells)
    : nx_(nx), cells_(std::move(cells)), cell_of_(nx, nx) {
    if (nx == 0) throw ValidationError("partition of an empty space");
    for (auto& cell : cells_) {
        if (cell.empty()) throw ValidationError("partition: empty cell");
        std::sort(cell.begin(), cell.end());
    }
    std::sort(cells_.begin(), cells_.end());
    for (std::size_t k = 0; k < cells_.size(); ++k)
        for (std::size_t x : cells_[k]) {
            if (x >= nx) throw ValidationError("partition: observation index out of range");
            if (cell_of_[x] != nx) throw ValidationError("partition: cells overlap");
            cell_of_[x] = k;
        }
    for (std::size_t x = 0; x < nx; ++x)
        if (cell_of_[x] == nx) throw ValidationError("partition: observation " + std::to_string(x) + " not covered");
}

Partition Partition::singletons(std::size_t nx) {
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t x = 0; x < nx; ++x) cells.push_back({x});
    return Partition(nx, std::move(cells));
}

Partition Partition::whole(std::size_t nx) {
    std::vector<std::size_t> all(nx);
    for (std::size_t x = 0; x < nx; ++x) all[x] = x;
    return Partition(nx, {all});
}

std::string Partition::format(const std::vector<std::string>& labels) const {
    std::string out;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        if (k) out += ';';
        for (std::size_t i = 0; i < cells_[k].size(); ++i) {
            if (i) out += ',';
            out += cells_[k][i] < labels.size() ? labels[cells_[k][i]] : std::to_string(cells_[k][i]);
        }
    }
    return out;
}

std::vector<Partition> all_partitions(std::size_t nx) {
    if (nx == 0) throw ValidationError("partition of an empty space");
    if (nx > kMaxPartitionSpace)
        throw SizeLimitError("partition enumeration: |X| = " + std::to_string(nx) + " exceeds the limit of " +
                             std::to_string(kMaxPartitionSpace));
    std::vector<Partition> out;
    std::vector<std::size_t> rgs(nx, 0);  // restricted growth string
    for (;;) {
        const std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<std::size_t>> cells(blocks);
        for (std::size_t x = 0; x < nx; ++x) cells[rgs[x]].push_back(x);
        out.emplace_back(nx, std::move(cells));

        std::size_t i = nx - 1;
        for (; i > 0; --i) {
            const std::size_t prefix_max = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
            if (rgs[i] <= prefix_max) break;
        }
        if (i == 0) break;
        ++rgs[i];
        std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
    }
    return out;
}

UpdateRuleTable UpdateRuleTable::external(std::size_t nx, std::size_t ny, std::vector<std::optional<CredalSet>> entries) {
    if (entries.size() != nx) throw DimensionError("update table: one entry per observation required");
    for (const auto& e : entries)
        if (e && (e->nx() != nx || e->ny() != ny)) throw DimensionError("update table: entry on a different space");
    UpdateRuleTable t;
    t.nx = nx;
    t.ny = ny;
    t.entries = std::move(entries);
    return t;
}

UpdateRuleTable c_conditioning(const CredalSet& p, const Partition& c) {
    if (c.nx() != p.nx()) throw DimensionError("partition and credal set disagree on |X|");
    std::vector<std::optional<CredalSet>> per_cell(c.cells().size());
    for (std::size_t k = 0; k < c.cells().size(); ++k) {
        const Event e = Event::observation_set(p.nx(), p.ny(), c.cells()[k]);
        if (can_condition(p, e)) per_cell[k] = credal_condition(p, e);
    }
    UpdateRuleTable t;
    t.nx = p.nx();
    t.ny = p.ny();
    for (std::size_t x = 0; x < p.nx(); ++x) t.entries.push_back(per_cell[c.cell_index(x)]);
    t.provenance = Provenance::c_conditioning;
    t.partition = c;
    return t;
}

DecisionRule rule_from_update(const UpdateRuleTable& table, const LossFn& loss) {
    if (table.ny != loss.ny()) throw DimensionError("update table and loss disagree on |Y|");
    const std::size_t na = loss.na();
    std::vector<double> rows;
    for (std::size_t x = 0; x < table.nx; ++x) {
        std::vector<double> r(na, 1.0 / static_cast<double>(na));
        if (table.defined(x))
            r = minimax_action(action_loss_rows(credal_marginal_y(*table.entries[x]), loss), TieBreak::spread).action;
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return DecisionRule(table.nx, na, std::move(rows));
}

CalibrationReport check_calibration(const CredalSet& p, const UpdateRuleTable& table, double tol) {
    if (table.nx != p.nx() || table.ny != p.ny()) throw DimensionError("update table and credal set on different spaces");
    CalibrationReport rep;
    for (std::size_t x = 0; x < table.nx; ++x) {
        if (!table.defined(x)) {
            rep.undefined.push_back(x);
            continue;
        }
        DistributionSet r = credal_marginal_y(*table.entries[x]);
        auto it = std::find_if(rep.classes.begin(), rep.classes.end(),
                               [&](const RangeClass& c) { return equal(c.range, r, kClassTol); });
        if (it == rep.classes.end())
            rep.classes.push_back({std::move(r), {x}});
        else
            it->cells.push_back(x);
    }

    for (std::size_t k = 0; k < rep.classes.size(); ++k) {
        const Event cell = Event::observation_set(p.nx(), p.ny(), rep.classes[k].cells);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const JointDist v = p.vertex(j);
            if (probability(v, cell) <= kPositiveMass) {
                rep.skipped.push_back({j, k});
                continue;
            }
            const double d = numerics::hull_distance(rep.classes[k].range.vertices(), marginal_y(condition(v, cell)));
            if (d > tol) rep.violations.push_back({j, k, d});
        }
    }
    return rep;
}

Narrowness compare_narrowness(const UpdateRuleTable& first, const UpdateRuleTable& second) {
    if (first.nx != second.nx || first.ny != second.ny) throw DimensionError("update tables on different spaces");
    bool le = true;  // first within second everywhere
    bool ge = true;
    for (std::size_t x = 0; x < first.nx; ++x) {
        if (first.defined(x) != second.defined(x)) return Narrowness::incomparable;
        if (!first.defined(x)) continue;
        if (le && !credal_subset(*first.entries[x], *second.entries[x])) le = false;
        if (ge && !credal_subset(*second.entries[x], *first.entries[x])) ge = false;
        if (!le && !ge) return Narrowness::incomparable;
    }
    if (le && ge) return Narrowness::equal;
    return le ? Narrowness::narrower : Narrowness::wider;
}

SharpSearchResult sharp_search(const CredalSet& p) {
    SharpSearchResult res;
    for (Partition& c : all_partitions(p.nx())) {
        UpdateRuleTable t = c_conditioning(p, c);
        res.candidates.push_back({std::move(c), std::move(t)});
    }
    const std::size_t n = res.candidates.size();
    res.relation.assign(n, std::vector<Narrowness>(n, Narrowness::equal));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Narrowness r = compare_narrowness(res.candidates[i].table, res.candidates[j].table);
            res.relation[i][j] = r;
            res.relation[j][i] = r == Narrowness::narrower ? Narrowness::wider
                                 : r == Narrowness::wider  ? Narrowness::narrower
                                                           : r;
        }
    for (std::size_t i = 0; i < n; ++i) {
        bool beaten = false;
        for (std::size_t j = 0; j < n && !beaten; ++j) beaten = res.relation[j][i] == Narrowness::narrower;
        if (!beaten) res.minimal.push_back(i);
    }
    return res;
}

const char* to_string(Narrowness n) {
    switch (n) {
    case Narrowness::narrower: return "narrower";
    case Narrowness::wider: return "wider";
    case Narrowness::equal: return "equal";
    case Narrowness::incomparable: return "incomparable";
    }
    return "?";
}

const char* to_string(Provenance p) { return p == Provenance::c_conditioning ? "C-conditioning" : "external"; }

}  // namespace credo
