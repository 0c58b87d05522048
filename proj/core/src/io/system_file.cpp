#include "bellman/io/system_file.hpp"

#include "bellman/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace bellman::io {

using control::ClassTable;
using control::Control;
using control::ControlTime;
using control::FiniteControlSystem;
using finite::Filtration;
using finite::ProbMeasure;
using finite::RandomVariable;
using finite::SampleSpace;
using finite::SigmaField;
using process::DiscreteProcess;
using process::kInfinity;
using process::RandomTime;
using process::Time;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "bellman-system/1";

/// Rejects number tokens with a fraction or exponent outside strings.
void reject_float_literals(std::string_view text) {
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_string) {
            if (ch == '\\') {
                ++i;
            } else if (ch == '"') {
                in_string = false;
            }
            continue;
        }
        if (ch == '"') {
            in_string = true;
            continue;
        }
        if (ch == '-' || (ch >= '0' && ch <= '9')) {
            std::size_t j = i;
            bool fractional = false;
            while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '-' ||
                                       text[j] == '+' || text[j] == '.' || text[j] == 'e' || text[j] == 'E')) {
                if (text[j] == '.' || text[j] == 'e' || text[j] == 'E') fractional = true;
                ++j;
            }
            if (fractional) {
                const auto [line, col] = line_column(text, i);
                throw ParseError("floating-point literal '" + std::string(text.substr(i, j - i)) +
                                     "' is not allowed; write an exact fraction string such as \"1/6\"",
                                 line, col);
            }
            i = j - 1;
        }
    }
}

/// Parsing context: the source text for locating offending tokens.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& where, const std::string& what, const std::string& token = {}) const {
        std::size_t line = 0;
        std::size_t col = 0;
        if (!token.empty()) {
            const auto pos = text_.find(token);
            if (pos != std::string_view::npos && text_.find(token, pos + 1) == std::string_view::npos) {
                std::tie(line, col) = line_column(text_, pos);
            }
        }
        throw ParseError(where + ": " + what, line, col);
    }

    const json& member(const json& obj, const char* key, const std::string& where) const {
        if (!obj.is_object()) fail(where, "expected an object");
        const auto it = obj.find(key);
        if (it == obj.end()) fail(where, std::string("missing member \"") + key + "\"");
        return *it;
    }

    Rational rational(const json& v, const std::string& where) const {
        if (v.is_number_integer()) return parse_rational(v.dump());
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            try {
                return parse_rational(s);
            } catch (const std::exception& e) {
                fail(where, "bad fraction \"" + s + "\": " + e.what(), "\"" + s + "\"");
            }
        }
        fail(where, "expected a fraction string or an integer");
    }

    std::size_t index(const json& v, std::size_t bound, const std::string& where) const {
        if (!v.is_number_integer() || v.get<long long>() < 0 || static_cast<std::size_t>(v.get<long long>()) >= bound) {
            fail(where, "expected an index below " + std::to_string(bound));
        }
        return static_cast<std::size_t>(v.get<long long>());
    }

    Time time(const json& v, const std::string& where) const {
        if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<Time>(v.get<long long>());
        fail(where, "expected a nonnegative integer time or \"inf\"");
    }

    std::string text(const json& v, const std::string& where) const {
        if (!v.is_string()) fail(where, "expected a string");
        return v.get<std::string>();
    }

    std::vector<Rational> rationals(const json& v, std::size_t n, const std::string& where) const {
        if (!v.is_array() || v.size() != n) fail(where, "expected " + std::to_string(n) + " values");
        std::vector<Rational> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(rational(v[i], where + "/" + std::to_string(i)));
        return out;
    }

    SigmaField field(const json& v, std::size_t n, const std::string& where) const {
        if (!v.is_array()) fail(where, "expected a list of atoms");
        std::vector<std::vector<std::size_t>> blocks;
        for (std::size_t b = 0; b < v.size(); ++b) {
            const auto& atom = v[b];
            if (!atom.is_array()) fail(where + "/" + std::to_string(b), "expected a list of outcome indices");
            std::vector<std::size_t> block;
            for (const auto& w : atom) block.push_back(index(w, n, where + "/" + std::to_string(b)));
            blocks.push_back(std::move(block));
        }
        try {
            return SigmaField::from_blocks(n, blocks);
        } catch (const std::exception& e) {
            fail(where, e.what());
        }
    }

private:
    std::string_view text_;
};

json rational_json(const Rational& r) { return to_string(r); }

json time_json(Time t) { return t == kInfinity ? json("inf") : json(t); }

bool has_object(const json& v) {
    if (v.is_object()) return true;
    if (v.is_array()) return std::any_of(v.begin(), v.end(), has_object);
    return false;
}

/// A scalar or an object-free array on one line, items separated by ", ".
std::string inline_form(const json& v) {
    if (!v.is_array()) return v.dump();
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += inline_form(v[i]);
    }
    return out + "]";
}

/// Two-space indentation; arrays without objects stay on one line when short.
void pretty(const json& v, std::size_t indent, std::string& out) {
    constexpr std::size_t kWidth = 100;
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    if (v.is_array() && !has_object(v)) {
        auto flat = inline_form(v);
        if (flat.size() + indent <= kWidth) {
            out += flat;
            return;
        }
    }
    if (v.is_array()) {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out += inner;
            pretty(v[i], indent + 2, out);
            out += i + 1 < v.size() ? ",\n" : "\n";
        }
        out += pad + "]";
        return;
    }
    if (v.is_object()) {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : v.items()) {
            out += inner + json(key).dump() + ": ";
            pretty(value, indent + 2, out);
            out += ++i < v.size() ? ",\n" : "\n";
        }
        out += pad + "}";
        return;
    }
    out += v.dump();
}

}  // namespace

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

FiniteControlSystem parse_system(std::string_view text) {
    reject_float_literals(text);
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(e.what(), line, col);
    }
    const Reader r(text);
    if (!doc.is_object()) r.fail("/", "expected an object");
    if (const auto it = doc.find("format"); it != doc.end() && *it != kFormat) {
        r.fail("/format", "unsupported format " + it->dump());
    }

    FiniteControlSystem sys;
    const auto& outcomes = r.member(doc, "outcomes", "/");
    if (!outcomes.is_array() || outcomes.empty()) r.fail("/outcomes", "expected a nonempty list of labels");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < outcomes.size(); ++i) labels.push_back(r.text(outcomes[i], "/outcomes/" + std::to_string(i)));
    try {
        sys.space = SampleSpace(labels);
    } catch (const std::exception& e) {
        r.fail("/outcomes", e.what());
    }
    const auto n = sys.space.size();
    const auto& horizon = r.member(doc, "horizon", "/");
    if (!horizon.is_number_integer() || horizon.get<long long>() < 0) r.fail("/horizon", "expected a nonnegative integer");
    sys.horizon = static_cast<std::size_t>(horizon.get<long long>());

    const auto& controls = r.member(doc, "controls", "/");
    if (!controls.is_array()) r.fail("/controls", "expected a list");
    for (std::size_t c = 0; c < controls.size(); ++c) {
        const std::string where = "/controls/" + std::to_string(c);
        const auto& node = controls[c];
        Control ctl{r.text(r.member(node, "id", where), where + "/id"), Filtration{},
                    ProbMeasure::uniform(n), RandomVariable{}, std::nullopt};
        try {
            ctl.measure = ProbMeasure(r.rationals(r.member(node, "measure", where), n, where + "/measure"));
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            r.fail(where + "/measure", e.what());
        }
        ctl.payoff = RandomVariable(r.rationals(r.member(node, "payoff", where), n, where + "/payoff"));
        if (const auto it = node.find("observed"); it != node.end()) {
            if (!it->is_array() || it->size() != n) r.fail(where + "/observed", "expected one row per outcome");
            std::vector<std::vector<Rational>> rows;
            for (std::size_t w = 0; w < n; ++w) {
                rows.push_back(r.rationals((*it)[w], sys.horizon + 1, where + "/observed/" + std::to_string(w)));
            }
            ctl.observed = DiscreteProcess(std::move(rows));
        }
        const auto& filtration = r.member(node, "filtration", where);
        if (filtration.is_string() && filtration.get<std::string>() == "natural") {
            if (!ctl.observed) r.fail(where + "/filtration", "\"natural\" needs an observed process");
            ctl.filtration = process::natural_filtration(*ctl.observed);
        } else {
            if (!filtration.is_array() || filtration.size() != sys.horizon + 1) {
                r.fail(where + "/filtration", "expected " + std::to_string(sys.horizon + 1) + " stages or \"natural\"");
            }
            std::vector<SigmaField> stages;
            for (std::size_t t = 0; t < filtration.size(); ++t) {
                stages.push_back(r.field(filtration[t], n, where + "/filtration/" + std::to_string(t)));
            }
            try {
                ctl.filtration = Filtration(std::move(stages));
            } catch (const std::exception& e) {
                r.fail(where + "/filtration", e.what());
            }
        }
        sys.controls.push_back(std::move(ctl));
    }
    const auto k = sys.controls.size();
    std::map<std::string, std::size_t> control_index;
    for (std::size_t c = 0; c < k; ++c) {
        if (!control_index.emplace(sys.controls[c].id, c).second) {
            r.fail("/controls", "duplicate control id \"" + sys.controls[c].id + "\"");
        }
    }
    auto lookup = [&](const json& v, const std::string& where) {
        const auto id = r.text(v, where);
        const auto it = control_index.find(id);
        if (it == control_index.end()) r.fail(where, "unknown control \"" + id + "\"");
        return it->second;
    };

    const auto& times = doc.contains("times") ? doc["times"] : json::array();
    if (!times.is_array()) r.fail("/times", "expected a list");
    for (std::size_t s = 0; s < times.size(); ++s) {
        const std::string where = "/times/" + std::to_string(s);
        const auto& node = times[s];
        ControlTime time{r.text(r.member(node, "id", where), where + "/id"), {}};
        if (node.contains("value")) {
            time.per_control.assign(k, RandomTime::constant(n, r.time(node["value"], where + "/value")));
        } else {
            const auto& per = r.member(node, "per_control", where);
            if (!per.is_object()) r.fail(where + "/per_control", "expected an object keyed by control id");
            time.per_control.assign(k, RandomTime{});
            std::vector<bool> seen(k, false);
            for (const auto& [id, values] : per.items()) {
                const auto c = lookup(json(id), where + "/per_control");
                if (!values.is_array() || values.size() != n) {
                    r.fail(where + "/per_control/" + id, "expected " + std::to_string(n) + " times");
                }
                std::vector<Time> v;
                for (const auto& e : values) v.push_back(r.time(e, where + "/per_control/" + id));
                time.per_control[c] = RandomTime(std::move(v));
                seen[c] = true;
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (!seen[c]) r.fail(where + "/per_control", "no entry for control \"" + sys.controls[c].id + "\"");
            }
        }
        sys.times.push_back(std::move(time));
    }

    const auto& classes = doc.contains("classes") ? doc["classes"] : json::object();
    if (!classes.is_object()) r.fail("/classes", "expected an object keyed by time id");
    for (const auto& [id, _] : classes.items()) {
        if (!sys.find_time(id)) r.fail("/classes", "classes given for unknown time \"" + id + "\"");
    }
    for (std::size_t s = 0; s < sys.times.size(); ++s) {
        const auto& id = sys.times[s].id;
        const std::string where = "/classes/" + id;
        const auto it = classes.find(id);
        if (it == classes.end()) r.fail("/classes", "no classes for time \"" + id + "\"");
        const auto& node = *it;
        if (node.is_string()) {
            if (node.get<std::string>() != "prefix" && node.get<std::string>() != "derive: prefix") r.fail(where, "expected \"prefix\", a partition or per-control lists");
            // derived once the earlier tables exist
            sys.classes.emplace_back();
            continue;
        }
        std::vector<std::vector<std::size_t>> lists(k);
        std::vector<bool> seen(k, false);
        if (node.is_array()) {
            for (std::size_t b = 0; b < node.size(); ++b) {
                if (!node[b].is_array()) r.fail(where + "/" + std::to_string(b), "expected a list of control ids");
                std::vector<std::size_t> block;
                for (const auto& v : node[b]) block.push_back(lookup(v, where + "/" + std::to_string(b)));
                std::sort(block.begin(), block.end());
                for (auto c : block) {
                    if (seen[c]) r.fail(where, "control \"" + sys.controls[c].id + "\" appears in two blocks");
                    seen[c] = true;
                    lists[c] = block;
                }
            }
        } else if (node.is_object()) {
            for (const auto& [cid, members] : node.items()) {
                const auto c = lookup(json(cid), where);
                if (!members.is_array()) r.fail(where + "/" + cid, "expected a list of control ids");
                for (const auto& v : members) lists[c].push_back(lookup(v, where + "/" + cid));
                std::sort(lists[c].begin(), lists[c].end());
                lists[c].erase(std::unique(lists[c].begin(), lists[c].end()), lists[c].end());
                seen[c] = true;
            }
        } else {
            r.fail(where, "expected \"prefix\", a partition or per-control lists");
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (!seen[c]) r.fail(where, "control \"" + sys.controls[c].id + "\" has no class");
        }
        sys.classes.push_back(ClassTable::from_lists(lists));
    }
    for (std::size_t s = 0; s < sys.times.size(); ++s) {
        const auto& node = classes[sys.times[s].id];
        if (!node.is_string()) continue;
        try {
            sys.classes[s] = control::derive_prefix_classes(sys, s);
        } catch (const std::exception& e) {
            r.fail("/classes/" + sys.times[s].id, e.what());
        }
    }
    return sys;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

FiniteControlSystem load_system(const std::filesystem::path& path) { return parse_system(read_file(path)); }

std::string write_system(const FiniteControlSystem& sys) {
    json doc;
    doc["format"] = kFormat;
    doc["outcomes"] = sys.space.labels();
    doc["horizon"] = sys.horizon;
    json controls = json::array();
    for (const auto& ctl : sys.controls) {
        json node;
        node["id"] = ctl.id;
        json measure = json::array();
        for (const auto& w : ctl.measure.weights()) measure.push_back(rational_json(w));
        node["measure"] = measure;
        json payoff = json::array();
        for (const auto& v : ctl.payoff.values()) payoff.push_back(rational_json(v));
        node["payoff"] = payoff;
        json stages = json::array();
        for (const auto& stage : ctl.filtration.stages()) stages.push_back(stage.atoms());
        node["filtration"] = stages;
        if (ctl.observed) {
            json rows = json::array();
            for (const auto& row : ctl.observed->rows()) {
                json r = json::array();
                for (const auto& v : row) r.push_back(rational_json(v));
                rows.push_back(r);
            }
            node["observed"] = rows;
        }
        controls.push_back(node);
    }
    doc["controls"] = controls;
    json times = json::array();
    json classes = json::object();
    for (std::size_t s = 0; s < sys.times.size(); ++s) {
        const auto& time = sys.times[s];
        json node;
        node["id"] = time.id;
        json per = json::object();
        for (std::size_t c = 0; c < sys.controls.size() && c < time.per_control.size(); ++c) {
            json values = json::array();
            for (auto v : time.per_control[c].values()) values.push_back(time_json(v));
            per[sys.controls[c].id] = values;
        }
        node["per_control"] = per;
        times.push_back(node);
        json table = json::object();
        if (s < sys.classes.size()) {
            for (std::size_t c = 0; c < sys.controls.size() && c < sys.classes[s].control_count(); ++c) {
                json members = json::array();
                for (auto d : sys.classes[s].members(c)) members.push_back(sys.controls[d].id);
                table[sys.controls[c].id] = members;
            }
        }
        classes[time.id] = table;
    }
    doc["times"] = times;
    doc["classes"] = classes;
    std::string out;
    pretty(doc, 0, out);
    return out + "\n";
}

}  // namespace bellman::io
