#include "credo/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "credo/errors.hpp"

namespace credo {

using nlohmann::json;

namespace {

const std::map<std::string, std::string>& builtins() {
    static const std::map<std::string, std::string> texts = {
        {"example_2_1", R"({
  "name": "example_2_1",
  "description": "Binary observation and outcome; the only information is Pr(Y = 1) = 2/3. Predict Y under 0/1 loss.",
  "space": {"x": ["0", "1"], "y": ["0", "1"], "a": ["0", "1"]},
  "loss": [
    [0, 1],
    [1, 0]
  ],
  "credal": {
    "constraints": [
      {"coeffs": [0, 1, 0, 1], "relation": "eq", "rhs": "2/3"}
    ]
  }
}
)"},
        {"monty_hall", R"({
  "name": "monty_hall",
  "description": "Contestant holds door 1; the host opens door 2 (G2) or door 3 (G3), never the car. Host policy unknown.",
  "space": {"x": ["G2", "G3"], "y": ["1", "2", "3"], "a": ["door 1", "door 2", "door 3"]},
  "loss": [
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0]
  ],
  "credal": {
    "constraints": [
      {"coeffs": [1, 0, 0, 1, 0, 0], "relation": "eq", "rhs": "1/3"},
      {"coeffs": [0, 1, 0, 0, 1, 0], "relation": "eq", "rhs": "1/3"},
      {"coeffs": [0, 0, 1, 0, 0, 1], "relation": "eq", "rhs": "1/3"},
      {"coeffs": [0, 1, 0, 0, 0, 0], "relation": "eq", "rhs": 0},
      {"coeffs": [0, 0, 0, 0, 0, 1], "relation": "eq", "rhs": 0}
    ]
  }
}
)"},
        {"walley_coin", R"({
  "name": "walley_coin",
  "description": "Two tosses of a fair coin with unknown dependence between them. Observe the first, predict the second.",
  "space": {"x": ["h", "t"], "y": ["h", "t"], "a": ["h", "t"]},
  "loss": [
    [0, 1],
    [1, 0]
  ],
  "credal": {
    "constraints": [
      {"coeffs": [1, 1, 0, 0], "relation": "eq", "rhs": "1/2"},
      {"coeffs": [1, 0, 1, 0], "relation": "eq", "rhs": "1/2"}
    ]
  }
}
)"},
    };
    return texts;
}

class Source {
public:
    Source(const std::string& text, std::string name) : text_(text), name_(std::move(name)) {}

    [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
        throw ValidationError(name_ + ":" + std::to_string(line) + ": " + msg);
    }

    std::size_t line_at(std::size_t pos) const {
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(std::min(pos, text_.size())), '\n'));
    }

    /// Position of the first `"key"` at or after `from`.
    std::size_t key_pos(const std::string& key, std::size_t from = 0) const {
        const auto p = text_.find('"' + key + '"', from);
        return p == std::string::npos ? 0 : p;
    }

    std::size_t key_line(const std::string& key, std::size_t from = 0) const { return line_at(key_pos(key, from)); }

    /// Line of element k of the array that follows `"key"`.
    std::size_t element_line(const std::string& key, std::size_t k, std::size_t from = 0) const {
        std::size_t p = key_pos(key, from);
        p = text_.find('[', p);
        if (p == std::string::npos) return key_line(key, from);
        int depth = 0;
        std::size_t seen = 0;
        bool in_string = false;
        bool at_element = true;
        for (std::size_t i = p; i < text_.size(); ++i) {
            const char c = text_[i];
            if (in_string) {
                if (c == '"') in_string = false;
                continue;
            }
            if (depth == 1 && at_element && !std::isspace(static_cast<unsigned char>(c)) && c != ']') {
                if (seen == k) return line_at(i);
                ++seen;
                at_element = false;
            }
            if (c == '"') in_string = true;
            else if (c == '[' || c == '{') ++depth;
            else if (c == ']' || c == '}') {
                if (--depth == 0) break;
            } else if (c == ',' && depth == 1)
                at_element = true;
        }
        return key_line(key, from);
    }

private:
    const std::string& text_;
    std::string name_;
};

double parse_number(const json& v, const Source& src, std::size_t line, const std::string& what) {
    if (v.is_number()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) src.fail(line, what + ": not a finite number");
        return d;
    }
    if (!v.is_string()) src.fail(line, what + ": expected a number or a rational string like \"2/3\"");
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    auto to_double = [&](const std::string& t) {
        double d = 0.0;
        const auto* end = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(t.data(), end, d);
        if (ec != std::errc() || ptr != end || t.empty()) src.fail(line, what + ": cannot read number \"" + s + "\"");
        return d;
    };
    if (slash == std::string::npos) return to_double(s);
    const double num = to_double(s.substr(0, slash));
    const double den = to_double(s.substr(slash + 1));
    if (den == 0.0) src.fail(line, what + ": zero denominator in \"" + s + "\"");
    return num / den;
}

std::vector<std::string> parse_labels(const json& space, const char* key, const Source& src) {
    const std::size_t line = src.key_line(key, src.key_pos("space"));
    if (!space.contains(key) || !space[key].is_array()) src.fail(line, std::string("space.") + key + ": expected a list of labels");
    std::vector<std::string> out;
    for (const auto& l : space[key]) {
        if (l.is_string())
            out.push_back(l.get<std::string>());
        else if (l.is_number_integer())
            out.push_back(std::to_string(l.get<long long>()));
        else
            src.fail(line, std::string("space.") + key + ": labels must be strings");
    }
    return out;
}

std::vector<double> parse_row(const json& row, std::size_t width, const Source& src, std::size_t line,
                              const std::string& what) {
    if (!row.is_array()) src.fail(line, what + ": expected a list of numbers");
    if (row.size() != width)
        src.fail(line, what + ": expected " + std::to_string(width) + " entries, got " + std::to_string(row.size()));
    std::vector<double> out;
    for (const auto& v : row) out.push_back(parse_number(v, src, line, what));
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

json number_json(double v) { return v; }

}  // namespace

CredalSet Scenario::credal() const {
    const std::size_t nx = space.nx();
    const std::size_t ny = space.ny();
    if (vertices) {
        std::vector<JointDist> pts;
        for (const auto& v : *vertices) pts.emplace_back(nx, ny, v);
        return CredalSet::from_vertices(nx, ny, pts);
    }
    numerics::LinearConstraints c(nx * ny);
    for (const auto& row : *constraints) {
        if (row.relation == ConstraintRow::Relation::eq)
            c.add_eq(row.coeffs, row.rhs);
        else
            c.add_le(row.coeffs, row.rhs);
    }
    return CredalSet::from_constraints(space, c);
}

bool Scenario::operator==(const Scenario& other) const {
    return name == other.name && description == other.description && space == other.space &&
           loss.ny() == other.loss.ny() && loss.na() == other.loss.na() && loss.table() == other.loss.table() &&
           vertices == other.vertices && constraints == other.constraints;
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
    const Source src(text, source);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        src.fail(src.line_at(e.byte == 0 ? 0 : e.byte - 1), std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) src.fail(1, "expected a JSON object at top level");

    Scenario s;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) src.fail(src.key_line("name"), "name: expected a string");
        s.name = doc["name"].get<std::string>();
    }
    if (doc.contains("description")) {
        if (!doc["description"].is_string()) src.fail(src.key_line("description"), "description: expected a string");
        s.description = doc["description"].get<std::string>();
    }

    if (!doc.contains("space") || !doc["space"].is_object()) src.fail(src.key_line("space"), "space: missing or not an object");
    const json& space = doc["space"];
    s.space.x_labels = parse_labels(space, "x", src);
    s.space.y_labels = parse_labels(space, "y", src);
    s.space.a_labels = parse_labels(space, "a", src);
    try {
        s.space.validate();
    } catch (const ValidationError& e) {
        src.fail(src.key_line("space"), e.what());
    }
    const std::size_t nx = s.space.nx();
    const std::size_t ny = s.space.ny();
    const std::size_t na = s.space.na();

    const std::size_t loss_line = src.key_line("loss");
    if (!doc.contains("loss") || !doc["loss"].is_array()) src.fail(loss_line, "loss: missing or not a list of rows");
    const json& loss = doc["loss"];
    for (std::size_t y = loss.size(); y < ny; ++y)
        src.fail(loss_line, "loss: row " + std::to_string(y) + " (y = '" + s.space.y_labels[y] + "') is missing; expected " +
                                std::to_string(ny) + " rows, one per y label");
    if (loss.size() > ny)
        src.fail(src.element_line("loss", ny), "loss: " + std::to_string(loss.size()) + " rows given, expected " +
                                                   std::to_string(ny) + " (one per y label)");
    std::vector<double> table;
    for (std::size_t y = 0; y < ny; ++y) {
        auto row = parse_row(loss[y], na, src, src.element_line("loss", y),
                             "loss row " + std::to_string(y) + " (y = '" + s.space.y_labels[y] + "')");
        table.insert(table.end(), row.begin(), row.end());
    }
    s.loss = LossFn(ny, na, std::move(table));

    const std::size_t credal_pos = src.key_pos("credal");
    const std::size_t credal_line = src.line_at(credal_pos);
    if (!doc.contains("credal") || !doc["credal"].is_object()) src.fail(credal_line, "credal: missing or not an object");
    const json& credal = doc["credal"];
    const bool has_v = credal.contains("vertices");
    const bool has_c = credal.contains("constraints");
    if (has_v == has_c) src.fail(credal_line, "credal: give exactly one of \"vertices\" or \"constraints\"");

    if (has_v) {
        const json& vs = credal["vertices"];
        if (!vs.is_array() || vs.empty()) src.fail(src.key_line("vertices", credal_pos), "credal.vertices: expected a nonempty list");
        std::vector<std::vector<double>> pts;
        for (std::size_t k = 0; k < vs.size(); ++k) {
            const std::size_t line = src.element_line("vertices", k, credal_pos);
            const std::string what = "credal.vertices[" + std::to_string(k) + "]";
            auto w = parse_row(vs[k], nx * ny, src, line, what);
            double sum = 0.0;
            for (double v : w) {
                if (v < 0.0) src.fail(line, what + ": negative weight");
                sum += v;
            }
            if (std::abs(sum - 1.0) > kSumTol) src.fail(line, what + ": weights sum to " + std::to_string(sum) + ", not 1");
            pts.push_back(std::move(w));
        }
        s.vertices = std::move(pts);
    } else {
        const json& cs = credal["constraints"];
        if (!cs.is_array()) src.fail(src.key_line("constraints", credal_pos), "credal.constraints: expected a list");
        std::vector<ConstraintRow> rows;
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::size_t line = src.element_line("constraints", k, credal_pos);
            const std::string what = "credal.constraints[" + std::to_string(k) + "]";
            const json& c = cs[k];
            if (!c.is_object() || !c.contains("coeffs") || !c.contains("rhs"))
                src.fail(line, what + ": expected {\"coeffs\": [...], \"relation\": \"eq\"|\"le\", \"rhs\": r}");
            ConstraintRow row;
            row.coeffs = parse_row(c["coeffs"], nx * ny, src, line, what + ".coeffs");
            row.rhs = parse_number(c["rhs"], src, line, what + ".rhs");
            const std::string rel = c.value("relation", std::string("eq"));
            if (rel == "eq")
                row.relation = ConstraintRow::Relation::eq;
            else if (rel == "le")
                row.relation = ConstraintRow::Relation::le;
            else
                src.fail(line, what + ".relation: expected \"eq\" or \"le\", got \"" + rel + "\"");
            rows.push_back(std::move(row));
        }
        s.constraints = std::move(rows);
        try {
            (void)s.credal();
        } catch (const EmptySetError&) {
            src.fail(credal_line, "credal.constraints: no distribution satisfies the constraints");
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    doc["description"] = s.description;
    doc["space"] = {{"x", s.space.x_labels}, {"y", s.space.y_labels}, {"a", s.space.a_labels}};
    json loss = json::array();
    for (std::size_t y = 0; y < s.loss.ny(); ++y) {
        json row = json::array();
        for (std::size_t a = 0; a < s.loss.na(); ++a) row.push_back(number_json(s.loss(y, a)));
        loss.push_back(std::move(row));
    }
    doc["loss"] = std::move(loss);
    if (s.vertices) {
        doc["credal"]["vertices"] = *s.vertices;
    } else {
        json rows = json::array();
        for (const auto& r : *s.constraints)
            rows.push_back({{"coeffs", r.coeffs},
                            {"relation", r.relation == ConstraintRow::Relation::eq ? "eq" : "le"},
                            {"rhs", r.rhs}});
        doc["credal"]["constraints"] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : builtins()) out.push_back(name);
    return out;
}

std::optional<std::string> builtin_scenario_text(const std::string& name) {
    const auto it = builtins().find(name);
    if (it == builtins().end()) return std::nullopt;
    return it->second;
}

Scenario builtin_scenario(const std::string& name) {
    const auto text = builtin_scenario_text(name);
    if (!text) throw ValidationError("unknown built-in scenario '" + name + "'");
    return parse_scenario(*text, name);
}

Event parse_event(const SpaceSpec& space, const std::string& text) {
    Event e = Event::full(space.nx(), space.ny());
    for (const auto& raw : split(text, '&')) {
        const std::string clause = trim(raw);
        const auto eq = clause.find('=');
        if (eq == std::string::npos) throw ValidationError("event: clause '" + clause + "' lacks '='");
        const std::string var = trim(clause.substr(0, eq));
        std::vector<std::size_t> idx;
        for (const auto& l : split(clause.substr(eq + 1), ',')) {
            const std::string label = trim(l);
            if (var == "X")
                idx.push_back(space.x_index(label));
            else if (var == "Y")
                idx.push_back(space.y_index(label));
            else
                throw ValidationError("event: unknown variable '" + var + "', expected X or Y");
        }
        e = e.intersect(var == "X" ? Event::observation_set(space.nx(), space.ny(), idx)
                                   : Event::outcome_set(space.nx(), space.ny(), idx));
    }
    return e;
}

Partition parse_partition(const SpaceSpec& space, const std::string& text) {
    std::vector<std::vector<std::size_t>> cells;
    for (const auto& cell : split(text, ';')) {
        std::vector<std::size_t> c;
        for (const auto& l : split(cell, ',')) c.push_back(space.x_index(trim(l)));
        cells.push_back(std::move(c));
    }
    return Partition(space.nx(), std::move(cells));
}

DecisionRule parse_rule(const SpaceSpec& space, const std::string& text) {
    std::vector<std::optional<std::size_t>> act(space.nx());
    for (const auto& raw : split(text, ';')) {
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw ValidationError("rule: entry '" + trim(raw) + "' lacks '='");
        const std::size_t x = space.x_index(trim(raw.substr(0, eq)));
        if (act[x]) throw ValidationError("rule: observation '" + space.x_labels[x] + "' assigned twice");
        act[x] = space.a_index(trim(raw.substr(eq + 1)));
    }
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < space.nx(); ++x) {
        if (!act[x]) throw ValidationError("rule: no action for observation '" + space.x_labels[x] + "'");
        out.push_back(*act[x]);
    }
    return DecisionRule::deterministic(space.na(), out);
}

}  // namespace credo
