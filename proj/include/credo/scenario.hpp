#pragma once

#include <optional>
#include <string>
#include <vector>

#include "credo/credal.hpp"
#include "credo/probability.hpp"
#include "credo/updating.hpp"

namespace credo {

/// One linear constraint over the row-major X x Y joint weights.
struct ConstraintRow {
    enum class Relation { eq, le };

    std::vector<double> coeffs;
    Relation relation = Relation::eq;
    double rhs = 0.0;

    bool operator==(const ConstraintRow&) const = default;
};

/**
 * A decision problem: spaces, loss table and credal set, given either as an
 * explicit vertex list or as linear constraints (simplex constraints implied).
 *
 * File format (JSON):
 *
 *     {
 *       "name": "...", "description": "...",
 *       "space": {"x": [...], "y": [...], "a": [...]},
 *       "loss": [[L(y0,a0), L(y0,a1), ...], ...],        one row per y label
 *       "credal": {"vertices": [[w(x0,y0), w(x0,y1), ..., w(x1,y0), ...], ...]}
 *              or {"constraints": [{"coeffs": [...], "relation": "eq"|"le", "rhs": r}, ...]}
 *     }
 *
 * Numbers may be written as JSON numbers or as rational strings like "2/3".
 */
struct Scenario {
    std::string name;
    std::string description;
    SpaceSpec space;
    LossFn loss = LossFn(1, 1, {0.0});
    std::optional<std::vector<std::vector<double>>> vertices;
    std::optional<std::vector<ConstraintRow>> constraints;

    /// The credal set described, vertex-enumerated if needed.
    CredalSet credal() const;

    bool operator==(const Scenario& other) const;
};

/// Parses and validates scenario text. `source` prefixes error messages,
/// which carry the line of the offending key. Throws ValidationError.
Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");

/// Reads a scenario file. Throws ValidationError (also for unreadable files).
Scenario load_scenario(const std::string& path);

/// Canonical JSON text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

std::vector<std::string> builtin_scenario_names();
/// Source text of a built-in scenario; nullopt for unknown names.
std::optional<std::string> builtin_scenario_text(const std::string& name);
/// Throws ValidationError for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Event syntax: clauses joined by '&', each `X=l1,l2` or `Y=l1,l2`. The
/// event is the intersection of the clauses.
Event parse_event(const SpaceSpec& space, const std::string& text);

/// Partition syntax: cells separated by ';', labels within a cell by ','.
Partition parse_partition(const SpaceSpec& space, const std::string& text);

/// Rule syntax: `x=a` pairs separated by ';', one per observation label.
DecisionRule parse_rule(const SpaceSpec& space, const std::string& text);

}  // namespace credo
