#include "credo/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "credo/decision.hpp"
#include "credo/errors.hpp"
#include "credo/games.hpp"
#include "credo/updating.hpp"

namespace credo::cli {

using nlohmann::json;

namespace {

double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

std::string num(double v) { return fmt::format("{:.6g}", snap(v)); }

// Result files carry values on a 1e-12 grid so solver noise does not leak
// into them.
json num_json(double v) { return snap(std::round(v * 1e12) / 1e12); }

json vec_json(const std::vector<double>& v) {
    json out = json::array();
    for (double d : v) out.push_back(num_json(d));
    return out;
}

json opt_json(const std::optional<double>& v) { return v ? num_json(*v) : json(nullptr); }

std::string opt_text(const std::optional<double>& v) { return v ? num(*v) : std::string("undefined"); }

std::string dist_text(const std::vector<double>& d, const std::vector<std::string>& labels) {
    std::string out = "(";
    for (std::size_t i = 0; i < d.size(); ++i) out += fmt::format("{}{}: {}", i ? ", " : "", labels[i], num(d[i]));
    return out + ")";
}

json dist_json(const std::vector<double>& d, const std::vector<std::string>& labels) {
    json out = json::object();
    for (std::size_t i = 0; i < d.size(); ++i) out[labels[i]] = num_json(d[i]);
    return out;
}

// Rows of a joint: one Y-distribution (unnormalized) per x.
json joint_json(const std::vector<double>& w, const SpaceSpec& s) {
    json out = json::object();
    for (std::size_t x = 0; x < s.nx(); ++x) {
        std::vector<double> row(w.begin() + static_cast<std::ptrdiff_t>(x * s.ny()),
                                w.begin() + static_cast<std::ptrdiff_t>((x + 1) * s.ny()));
        out[s.x_labels[x]] = dist_json(row, s.y_labels);
    }
    return out;
}

std::string joint_text(const std::vector<double>& w, const SpaceSpec& s) {
    std::string out;
    for (std::size_t x = 0; x < s.nx(); ++x) {
        std::vector<double> row(w.begin() + static_cast<std::ptrdiff_t>(x * s.ny()),
                                w.begin() + static_cast<std::ptrdiff_t>((x + 1) * s.ny()));
        out += fmt::format("{}X={} {}", x ? "  " : "", s.x_labels[x], dist_text(row, s.y_labels));
    }
    return out;
}

std::optional<std::size_t> pure_action(const std::vector<double>& row) {
    for (std::size_t a = 0; a < row.size(); ++a)
        if (row[a] >= 1.0 - 1e-9) return a;
    return std::nullopt;
}

json row_json(const std::vector<double>& row, const SpaceSpec& s) {
    json out = {{"distribution", dist_json(row, s.a_labels)}};
    const auto a = pure_action(row);
    out["action"] = a ? json(s.a_labels[*a]) : json(nullptr);
    return out;
}

std::string row_text(const std::vector<double>& row, const SpaceSpec& s) {
    const auto a = pure_action(row);
    return a ? s.a_labels[*a] : dist_text(row, s.a_labels);
}

json rule_json(const DecisionRule& r, const SpaceSpec& s) {
    json out = json::object();
    for (std::size_t x = 0; x < r.nx(); ++x) out[s.x_labels[x]] = row_json(r.row(x), s);
    return out;
}

std::string rule_text(const DecisionRule& r, const SpaceSpec& s, const std::string& indent = "  ") {
    std::string out;
    for (std::size_t x = 0; x < r.nx(); ++x)
        out += fmt::format("{}X={} -> {}\n", indent, s.x_labels[x], row_text(r.row(x), s));
    return out;
}

json ydist_set_json(const DistributionSet& d, const SpaceSpec& s) {
    json out = json::array();
    for (const auto& v : d.vertices()) out.push_back(dist_json(v, s.y_labels));
    return out;
}

std::string ydist_set_text(const DistributionSet& d, const SpaceSpec& s, const std::string& indent) {
    std::string out;
    for (const auto& v : d.vertices()) out += indent + dist_text(v, s.y_labels) + "\n";
    return out;
}

json credal_json(const CredalSet& p, const SpaceSpec& s) {
    json out = json::array();
    for (const auto& v : p.points()) out.push_back(joint_json(v, s));
    return out;
}

std::string credal_text(const CredalSet& p, const SpaceSpec& s, const std::string& indent) {
    std::string out;
    for (std::size_t j = 0; j < p.size(); ++j) out += fmt::format("{}[{}] {}\n", indent, j, joint_text(p.points()[j], s));
    return out;
}

json certificate_json(const EquilibriumCertificate& c, double tol) {
    json chain = json::array();
    for (double v : c.chain) chain.push_back(num_json(v));
    json res = json::array();
    for (double v : c.equality_chain_residuals) res.push_back(v);
    return {{"chain", chain},
            {"equality_chain_residuals", res},
            {"support_condition_residual", c.support_condition_residual},
            {"best_response_gap_agent", c.best_response_gap_agent},
            {"best_response_gap_bookie", c.best_response_gap_bookie},
            {"max_residual", c.max_residual()},
            {"passes", c.passes(tol)}};
}

std::string certificate_text(const EquilibriumCertificate& c, double tol) {
    std::string out = "certificate:\n";
    out += fmt::format("  chain: E*[L] = {}, min E*[L] = {}, maximin = {}, minimax = {}, max E[L] = {}\n", num(c.chain[0]),
                       num(c.chain[1]), num(c.chain[2]), num(c.chain[3]), num(c.chain[4]));
    out += fmt::format("  chain residuals: {:.2e} {:.2e} {:.2e} {:.2e}\n", c.equality_chain_residuals[0],
                       c.equality_chain_residuals[1], c.equality_chain_residuals[2], c.equality_chain_residuals[3]);
    out += fmt::format("  support residual {:.2e}, agent gap {:.2e}, bookie gap {:.2e}\n", c.support_condition_residual,
                       c.best_response_gap_agent, c.best_response_gap_bookie);
    out += fmt::format("  {} (tolerance {:g})\n", c.passes(tol) ? "PASS" : "FAIL", tol);
    return out;
}

std::size_t observation(const SpaceSpec& s, const std::string& label) { return s.x_index(label); }

DecisionRule named_rule(const std::string& spec, const Scenario& sc, const CredalSet& p) {
    if (spec == "apriori") return apriori_minimax(p, sc.loss).rule;
    if (spec == "aposteriori") return aposteriori_minimax(p, sc.loss).rule;
    if (spec == "uniform") return DecisionRule::uniform(sc.space.nx(), sc.space.na());
    if (spec == "ignoring") return check_ignoring_optimal(p, sc.loss, 1e-6, 0).ignoring_rule;
    return parse_rule(sc.space, spec);
}

CommandOutput solve_apriori(const Scenario& sc, const CredalSet& p) {
    const auto r = apriori_minimax(p, sc.loss);
    CommandOutput o;
    o.result = {{"value", num_json(r.value)},
                {"rule", rule_json(r.rule, sc.space)},
                {"worst_case_vertices", r.worst_case_vertices},
                {"vertex_weights", vec_json(r.vertex_weights)},
                {"vertex_count", p.size()}};
    o.text = fmt::format("a priori minimax value: {}\nrule:\n{}worst-case vertices: {}\n", num(r.value),
                         rule_text(r.rule, sc.space), fmt::format("{}", fmt::join(r.worst_case_vertices, ", ")));
    return o;
}

CommandOutput solve_aposteriori(const Scenario& sc, const CredalSet& p) {
    const auto r = aposteriori_minimax(p, sc.loss);
    CommandOutput o;
    json per_x = json::object();
    std::string text = "a posteriori minimax rule:\n";
    for (std::size_t x = 0; x < sc.space.nx(); ++x) {
        per_x[sc.space.x_labels[x]] = {{"value", opt_json(r.per_x_values[x])},
                                      {"unconstrained", static_cast<bool>(r.unconstrained[x])}};
        text += fmt::format("  X={} -> {}   value {}{}\n", sc.space.x_labels[x], row_text(r.rule.row(x), sc.space),
                            opt_text(r.per_x_values[x]), r.unconstrained[x] ? " (unconstrained: P | X = x empty)" : "");
    }
    o.result = {{"rule", rule_json(r.rule, sc.space)},
                {"per_x", per_x},
                {"worst_case_value", num_json(r.value)},
                {"worst_case_vertices", r.worst_case_vertices}};
    text += fmt::format("worst-case expected loss of this rule over P: {}\n", num(r.value));
    o.text = text;
    return o;
}

CommandOutput solve_game(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const double inf = std::numeric_limits<double>::infinity();
    CommandOutput o;
    GameSolution g = opt.observe ? solve_px_game(p, sc.loss, observation(sc.space, *opt.observe), inf)
                                 : solve_p_game(p, sc.loss, inf);
    const auto& eq = g.equilibrium;
    json support = json::array();
    std::string text = opt.observe ? fmt::format("P-x-game after observing X={}\n", *opt.observe) : "P-game\n";
    text += fmt::format("value: {}\n", num(eq.value));
    if (opt.observe) {
        const auto row = eq.agent.row(observation(sc.space, *opt.observe));
        o.result["agent"] = row_json(row, sc.space);
        text += fmt::format("agent plays: {}\n", row_text(row, sc.space));
    } else {
        o.result["agent"] = rule_json(eq.agent, sc.space);
        text += "agent rule:\n" + rule_text(eq.agent, sc.space);
    }
    text += "bookie mixture:\n";
    for (std::size_t k = 0; k < eq.bookie.support.size(); ++k) {
        support.push_back({{"vertex", eq.bookie.vertex_index[k]},
                           {"weight", num_json(eq.bookie.weights[k])},
                           {"distribution", joint_json(eq.bookie.support[k].weights(), sc.space)}});
        text += fmt::format("  {} x vertex {}: {}\n", num(eq.bookie.weights[k]), eq.bookie.vertex_index[k],
                            joint_text(eq.bookie.support[k].weights(), sc.space));
    }
    text += fmt::format("aggregate: {}\n", joint_text(eq.aggregate.weights(), sc.space));
    text += certificate_text(g.certificate, opt.tolerance);
    o.result["game"] = opt.observe ? "P-x" : "P";
    if (opt.observe) o.result["observation"] = *opt.observe;
    o.result["value"] = num_json(eq.value);
    o.result["bookie"] = support;
    o.result["aggregate"] = joint_json(eq.aggregate.weights(), sc.space);
    o.result["certificate"] = certificate_json(g.certificate, opt.tolerance);
    o.text = text;
    if (!g.certificate.passes(opt.tolerance)) o.exit_code = kCertificate;
    return o;
}

CommandOutput condition_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    if (!opt.event) throw ValidationError("condition: --on EVENT is required");
    const Event e = parse_event(sc.space, *opt.event);
    const CredalSet c = credal_condition(p, e);
    const bool closure = conditioning_drops_vertices(p, e);
    const DistributionSet cy = credal_marginal_y(c);
    CommandOutput o;
    o.result = {{"event", *opt.event},
                {"vertices", credal_json(c, sc.space)},
                {"y_marginal_set", ydist_set_json(cy, sc.space)},
                {"closure", closure}};
    o.text = fmt::format("P | {}: {} vertices\n{}Y-marginal set:\n{}", *opt.event, c.size(), credal_text(c, sc.space, "  "),
                         ydist_set_text(cy, sc.space, "  "));
    if (closure) o.text += "note: some vertices give the event zero probability; the result is the closure of P | E\n";
    return o;
}

CommandOutput hull_cmd(const Scenario& sc, const CredalSet& p) {
    const HullSet h = build_hull(p);
    const bool eq = credal_equal(p, h);
    CommandOutput o;
    o.result = {{"credal_vertices", credal_json(p, sc.space)}, {"hull_vertices", credal_json(h, sc.space)}, {"equal", eq}};
    o.text = fmt::format("P: {} vertices\n{}<P>: {} vertices\n{}P {} <P>\n", p.size(), credal_text(p, sc.space, "  "),
                         h.size(), credal_text(h, sc.space, "  "), eq ? "=" : "is strictly contained in");
    return o;
}

CommandOutput check_conditioning_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const auto r = check_conditioning_optimal(p, sc.loss, opt.tolerance);
    json per_x = json::object();
    std::string values;
    for (std::size_t x = 0; x < sc.space.nx(); ++x) {
        per_x[sc.space.x_labels[x]] = opt_json(r.aposteriori_values[x]);
        values += fmt::format("  X={}: {}\n", sc.space.x_labels[x], opt_text(r.aposteriori_values[x]));
    }
    CommandOutput o;
    o.result = {{"hull_equal", r.hull_equal},
                {"full_support", r.full_support},
                {"apriori_value", num_json(r.apriori_value)},
                {"aposteriori_values", per_x},
                {"jointly_optimal_value", opt_json(r.jointly_optimal_value)},
                {"exists_jointly_optimal", r.exists_jointly_optimal},
                {"apriori_rule_conditions", r.apriori_rule_conditions},
                {"max_conditional_gap", r.max_conditional_gap},
                {"consistent", r.consistent}};
    o.text = fmt::format(
        "P = <P>: {}\nfull support: {}\na priori value: {}\na posteriori values:\n{}"
        "some a priori optimal rule is a posteriori optimal: {}\nsolver's a priori rule is a posteriori optimal: {}\n"
        "consistent with the hull condition: {}\n",
        r.hull_equal, r.full_support, num(r.apriori_value), values, r.exists_jointly_optimal, r.apriori_rule_conditions,
        r.consistent);
    return o;
}

CommandOutput check_ignoring_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const auto r = check_ignoring_optimal(p, sc.loss, opt.tolerance);
    CommandOutput o;
    const auto row = r.ignoring_rule.row(0);
    o.result = {{"hypothesis", to_string(r.hypothesis)},
                {"vertex_has_product", r.vertex_has_product},
                {"samples", r.samples},
                {"sample_failures", r.sample_failures},
                {"ignoring_action", row_json(row, sc.space)},
                {"ignoring_value_y", num_json(r.ignoring_value_y)},
                {"ignoring_worst_case", num_json(r.ignoring_worst_case)},
                {"apriori_value", num_json(r.apriori_value)},
                {"ignoring_optimal", r.ignoring_optimal},
                {"identity_holds", r.identity_holds}};
    o.text = fmt::format(
        "independence hypothesis: {} ({} sampled interior points, {} failures)\nbest rule ignoring X: {}\n"
        "worst case over P_Y: {}\nworst case over P: {}\na priori minimax value: {}\n"
        "ignoring is a priori optimal: {}\nmarginal identity holds: {}\n",
        to_string(r.hypothesis), r.samples, r.sample_failures, row_text(row, sc.space), num(r.ignoring_value_y),
        num(r.ignoring_worst_case), num(r.apriori_value), r.ignoring_optimal, r.identity_holds);
    return o;
}

CommandOutput detect_dilation_cmd(const Scenario& sc, const CredalSet& p) {
    const auto r = detect_dilation(p);
    json entries = json::object();
    std::string text = "P_Y:\n" + ydist_set_text(r.prior_y, sc.space, "  ");
    for (const auto& e : r.entries) {
        const std::string& lab = sc.space.x_labels[e.x];
        if (!e.defined) {
            entries[lab] = {{"defined", false}};
            text += fmt::format("X={}: P | X = x is empty\n", lab);
            continue;
        }
        entries[lab] = {{"defined", true},
                        {"dilation", e.dilation},
                        {"covers_prior", e.covers_prior},
                        {"strictly_larger", e.strictly_larger},
                        {"conditional_y", ydist_set_json(e.conditional_y, sc.space)}};
        text += fmt::format("X={}: dilation {}\n{}", lab, e.dilation ? "yes" : "no",
                            ydist_set_text(e.conditional_y, sc.space, "  "));
    }
    CommandOutput o;
    o.result = {{"prior_y", ydist_set_json(r.prior_y, sc.space)}, {"observations", entries}, {"any", r.any()}};
    o.text = text;
    return o;
}

Partition partition_option(const Scenario& sc, const CommandOptions& opt) {
    return opt.partition ? parse_partition(sc.space, *opt.partition) : Partition::singletons(sc.space.nx());
}

json table_json(const UpdateRuleTable& t, const SpaceSpec& s) {
    json out = json::object();
    for (std::size_t x = 0; x < t.nx; ++x) {
        if (!t.defined(x)) {
            out[s.x_labels[x]] = nullptr;
            continue;
        }
        out[s.x_labels[x]] = {{"vertices", credal_json(*t.entries[x], s)},
                              {"y_marginal_set", ydist_set_json(credal_marginal_y(*t.entries[x]), s)}};
    }
    return out;
}

CommandOutput c_condition_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const Partition c = partition_option(sc, opt);
    const UpdateRuleTable t = c_conditioning(p, c);
    const DecisionRule rule = rule_from_update(t, sc.loss);
    const double worst = worst_case_loss(p, rule, sc.loss);
    std::string text = fmt::format("C-conditioning on {}\n", c.format(sc.space.x_labels));
    for (std::size_t x = 0; x < t.nx; ++x) {
        if (!t.defined(x)) {
            text += fmt::format("X={}: undefined (cell has zero probability)\n", sc.space.x_labels[x]);
            continue;
        }
        text += fmt::format("X={}: Y-marginal set\n{}", sc.space.x_labels[x],
                            ydist_set_text(credal_marginal_y(*t.entries[x]), sc.space, "  "));
    }
    text += "rule from update:\n" + rule_text(rule, sc.space);
    text += fmt::format("worst-case expected loss over P: {}\n", num(worst));
    CommandOutput o;
    o.result = {{"partition", c.format(sc.space.x_labels)},
                {"provenance", to_string(t.provenance)},
                {"table", table_json(t, sc.space)},
                {"rule", rule_json(rule, sc.space)},
                {"worst_case_value", num_json(worst)}};
    o.text = text;
    return o;
}

CommandOutput check_calibration_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const Partition c = partition_option(sc, opt);
    const auto r = check_calibration(p, c_conditioning(p, c), opt.tolerance);
    json classes = json::array();
    std::string text = fmt::format("calibration of C-conditioning on {}\n", c.format(sc.space.x_labels));
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
        std::vector<std::string> cells;
        for (std::size_t x : r.classes[k].cells) cells.push_back(sc.space.x_labels[x]);
        classes.push_back({{"cells", cells}, {"range", ydist_set_json(r.classes[k].range, sc.space)}});
        text += fmt::format("class {}: X_R = {{{}}}\n{}", k, fmt::join(cells, ", "),
                            ydist_set_text(r.classes[k].range, sc.space, "  "));
    }
    json violations = json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"vertex", v.vertex}, {"class", v.range_class}, {"residual", v.residual}});
        text += fmt::format("violation: vertex {} class {} residual {:.3g}\n", v.vertex, v.range_class, v.residual);
    }
    json skipped = json::array();
    for (const auto& s : r.skipped) skipped.push_back({{"vertex", s.vertex}, {"class", s.range_class}});
    if (!r.skipped.empty()) text += fmt::format("{} vertex/class checks skipped (zero cell mass)\n", r.skipped.size());
    text += r.calibrated() ? "calibrated\n" : "NOT calibrated\n";
    CommandOutput o;
    o.result = {{"partition", c.format(sc.space.x_labels)},
                {"classes", classes},
                {"violations", violations},
                {"skipped", skipped},
                {"calibrated", r.calibrated()}};
    o.text = text;
    return o;
}

CommandOutput sharp_search_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const auto r = sharp_search(p);
    json cands = json::array();
    std::string text = fmt::format("{} C-conditioning candidates\n", r.candidates.size());
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        const auto& cand = r.candidates[i];
        const bool calibrated = check_calibration(p, cand.table, opt.tolerance).calibrated();
        json rel = json::array();
        for (auto n : r.relation[i]) rel.push_back(to_string(n));
        cands.push_back({{"partition", cand.partition.format(sc.space.x_labels)},
                         {"provenance", to_string(cand.table.provenance)},
                         {"calibrated", calibrated},
                         {"relation", rel}});
    }
    json minimal = json::array();
    text += "narrowness-minimal:\n";
    for (std::size_t i : r.minimal) {
        minimal.push_back(r.candidates[i].partition.format(sc.space.x_labels));
        text += fmt::format("  {}\n", r.candidates[i].partition.format(sc.space.x_labels));
    }
    CommandOutput o;
    o.result = {{"candidates", cands}, {"minimal", minimal}};
    o.text = text;
    return o;
}

CommandOutput time_inconsistency_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const auto r = time_inconsistency_report(p, sc.loss, opt.tolerance);
    json per_x = json::object();
    std::string text = fmt::format("a priori rule ({}), value {}:\n{}", r.apriori_game, num(r.apriori.value),
                                   rule_text(r.apriori.rule, sc.space));
    text += fmt::format("a posteriori rule ({}):\n", r.aposteriori_game);
    for (std::size_t x = 0; x < sc.space.nx(); ++x) {
        per_x[sc.space.x_labels[x]] = {{"aposteriori_value", opt_json(r.aposteriori.per_x_values[x])},
                                      {"apriori_rule_conditional_value", opt_json(r.apriori_conditional_values[x])},
                                      {"row_distance", opt_json(r.row_distance[x])}};
        text += fmt::format("  X={} -> {}   value {} (a priori rule here: {})\n", sc.space.x_labels[x],
                            row_text(r.aposteriori.rule.row(x), sc.space), opt_text(r.aposteriori.per_x_values[x]),
                            opt_text(r.apriori_conditional_values[x]));
    }
    text += fmt::format("rules differ: {}\nvalues differ: {}\n{}\n", r.rules_differ, r.values_differ,
                        r.inconsistent() ? "time-inconsistent" : "time-consistent");
    CommandOutput o;
    o.result = {{"apriori", {{"rule", rule_json(r.apriori.rule, sc.space)}, {"value", num_json(r.apriori.value)}, {"game", r.apriori_game}}},
                {"aposteriori",
                 {{"rule", rule_json(r.aposteriori.rule, sc.space)},
                  {"worst_case_value", num_json(r.aposteriori.value)},
                  {"game", r.aposteriori_game}}},
                {"per_x", per_x},
                {"rules_differ", r.rules_differ},
                {"values_differ", r.values_differ},
                {"inconsistent", r.inconsistent()}};
    o.text = text;
    return o;
}

CommandOutput compare_rules_cmd(const Scenario& sc, const CredalSet& p, const CommandOptions& opt) {
    const DecisionRule a = named_rule(opt.first, sc, p);
    const DecisionRule b = named_rule(opt.second, sc, p);
    const auto r = walley_compare(a, b, p, sc.loss);
    const double wa = worst_case_loss(p, a, sc.loss);
    const double wb = worst_case_loss(p, b, sc.loss);
    CommandOutput o;
    o.result = {{"first", {{"spec", opt.first}, {"rule", rule_json(a, sc.space)}, {"worst_case_value", num_json(wa)}}},
                {"second", {{"spec", opt.second}, {"rule", rule_json(b, sc.space)}, {"worst_case_value", num_json(wb)}}},
                {"first_minus_second", num_json(r.first_minus_second)},
                {"second_minus_first", num_json(r.second_minus_first)},
                {"verdict", to_string(r.verdict)}};
    o.text = fmt::format("first ({}), worst case {}:\n{}second ({}), worst case {}:\n{}"
                         "max E[L1 - L2] = {}, max E[L2 - L1] = {}\nfirst is {} than the second\n",
                         opt.first, num(wa), rule_text(a, sc.space), opt.second, num(wb), rule_text(b, sc.space),
                         num(r.first_minus_second), num(r.second_minus_first), to_string(r.verdict));
    if (r.verdict == Preference::equivalent) o.text = o.text.substr(0, o.text.rfind("first is")) + "the rules are equivalent\n";
    if (r.verdict == Preference::incomparable) o.text = o.text.substr(0, o.text.rfind("first is")) + "the rules are incomparable\n";
    return o;
}

int exit_for(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DimensionError*>(&e)) return kValidation;
    if (dynamic_cast<const CertificateError*>(&e)) return kCertificate;
    if (dynamic_cast<const SizeLimitError*>(&e)) return kSizeLimit;
    return kFailure;
}

}  // namespace

CommandOutput run_command(const std::string& command, const Scenario& sc, const CommandOptions& opt) {
    const CredalSet p = sc.credal();
    if (command == "solve-apriori") return solve_apriori(sc, p);
    if (command == "solve-aposteriori") return solve_aposteriori(sc, p);
    if (command == "solve-game") return solve_game(sc, p, opt);
    if (command == "condition") return condition_cmd(sc, p, opt);
    if (command == "hull") return hull_cmd(sc, p);
    if (command == "check-conditioning") return check_conditioning_cmd(sc, p, opt);
    if (command == "check-ignoring") return check_ignoring_cmd(sc, p, opt);
    if (command == "detect-dilation") return detect_dilation_cmd(sc, p);
    if (command == "c-condition") return c_condition_cmd(sc, p, opt);
    if (command == "check-calibration") return check_calibration_cmd(sc, p, opt);
    if (command == "sharp-search") return sharp_search_cmd(sc, p, opt);
    if (command == "time-inconsistency") return time_inconsistency_cmd(sc, p, opt);
    if (command == "compare-rules") return compare_rules_cmd(sc, p, opt);
    throw ValidationError("unknown command '" + command + "'");
}

json result_document(const std::string& command, const Scenario& sc, const CommandOptions& opt, const CommandOutput& out) {
    return {{"schema_version", kSchemaVersion},
            {"command", command},
            {"scenario", sc.name},
            {"tolerance", opt.tolerance},
            {"exit_code", out.exit_code},
            {"result", out.result}};
}

Scenario resolve_scenario(const std::string& spec) {
    if (std::filesystem::is_regular_file(spec)) return load_scenario(spec);
    if (builtin_scenario_text(spec)) return builtin_scenario(spec);
    throw ValidationError("scenario '" + spec + "' is neither a readable file nor a built-in (" +
                          fmt::format("{}", fmt::join(builtin_scenario_names(), ", ")) + ")");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"credo: minimax decisions, games and updating over credal sets"};
    app.require_subcommand(1);

    std::string scenario_spec;
    std::string out_path;
    std::string format = "text";
    CommandOptions opt;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"solve-apriori", "Minimax rule chosen before observing X"},
        {"solve-aposteriori", "Minimax action after each observation"},
        {"solve-game", "Equilibrium and certificate of the P-game (or the P-x-game with --observe)"},
        {"condition", "Condition the credal set on an event"},
        {"hull", "Construct <P> and compare it with P"},
        {"check-conditioning", "Check whether a priori optimal rules condition"},
        {"check-ignoring", "Check whether ignoring the observation is optimal"},
        {"detect-dilation", "Report dilation of the Y-marginal set at each observation"},
        {"c-condition", "Update by conditioning on partition cells"},
        {"check-calibration", "Test calibration of C-conditioning"},
        {"sharp-search", "Narrowness-minimal C-conditioning rules over all partitions"},
        {"time-inconsistency", "Compare the a priori and a posteriori rules"},
        {"compare-rules", "Compare two rules by their worst-case loss difference over P"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario_spec, "Scenario file, or a built-in name")->required();
        sub->add_option("--out", out_path, "Write the JSON result document here");
        sub->add_option("--tolerance", opt.tolerance, "Tolerance for certificates and verdicts")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "Report format on stdout")->check(CLI::IsMember({"text", "json"}));
        if (name == "solve-game") sub->add_option("--observe", opt.observe, "Observation label for the P-x-game");
        if (name == "condition") sub->add_option("--on", opt.event, "Event, e.g. X=a,b&Y=c")->required();
        if (name == "c-condition" || name == "check-calibration")
            sub->add_option("--partition", opt.partition, "Cells separated by ';', labels by ','");
        if (name == "compare-rules") {
            sub->add_option("--first", opt.first, "apriori | aposteriori | uniform | ignoring | x=a;...");
            sub->add_option("--second", opt.second, "apriori | aposteriori | uniform | ignoring | x=a;...");
        }
    }
    std::string example_name;
    CLI::App* examples = app.add_subcommand("examples", "List built-in scenarios, or print one");
    examples->add_option("name", example_name, "Built-in scenario to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (examples->parsed()) {
            if (example_name.empty()) {
                for (const auto& n : builtin_scenario_names()) {
                    const Scenario s = builtin_scenario(n);
                    out << n << "  " << s.description << "\n";
                }
                return kOk;
            }
            const auto text = builtin_scenario_text(example_name);
            if (!text) throw ValidationError("unknown built-in scenario '" + example_name + "'");
            out << *text;
            return kOk;
        }

        const std::string command = app.get_subcommands().front()->get_name();
        const Scenario sc = resolve_scenario(scenario_spec);
        const CommandOutput res = run_command(command, sc, opt);
        const json doc = result_document(command, sc, opt, res);
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw ValidationError(out_path + ": cannot write result file");
            f << doc.dump(2) << "\n";
        }
        if (format == "json")
            out << doc.dump(2) << "\n";
        else
            out << fmt::format("scenario: {}\n", sc.name) << res.text;
        return res.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e);
    }
}

}  // namespace credo::cli
