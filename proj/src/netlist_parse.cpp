#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "fibernet/error.hpp"
#include "fibernet/netlist.hpp"

namespace fibernet::netlist {

namespace {

struct Token {
    std::string_view text;
    int column;
};

struct LineError {
    int column;
    std::string message;
};

std::vector<Token> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Field {
    std::string_view key;
    std::string_view value;
    int key_column;
    int value_column;
};

// key=value fields of a directive, checked against the allowed key set.
class Fields {
public:
    Fields(const std::vector<Token>& tokens, std::size_t first, std::string_view directive,
           std::initializer_list<std::string_view> allowed)
        : directive_(directive) {
        for (std::size_t k = first; k < tokens.size(); ++k) {
            const Token& t = tokens[k];
            const auto eq = t.text.find('=');
            if (eq == std::string_view::npos || eq == 0 || eq + 1 == t.text.size())
                throw LineError{t.column, "expected key=value, found '" + std::string(t.text) + "'"};
            Field f{t.text.substr(0, eq), t.text.substr(eq + 1), t.column, t.column + static_cast<int>(eq) + 1};
            if (std::find(allowed.begin(), allowed.end(), f.key) == allowed.end()) {
                std::string list;
                for (std::string_view a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
                throw LineError{t.column, "unknown key '" + std::string(f.key) + "' for " + std::string(directive) +
                                              " (expected " + list + ")"};
            }
            for (const Field& g : fields_)
                if (g.key == f.key) throw LineError{t.column, "duplicate key '" + std::string(f.key) + "'"};
            fields_.push_back(f);
        }
    }

    const Field* find(std::string_view key) const {
        for (const Field& f : fields_)
            if (f.key == key) return &f;
        return nullptr;
    }

    const Field& require(std::string_view key) const {
        if (const Field* f = find(key)) return *f;
        throw LineError{1, std::string(directive_) + " requires key '" + std::string(key) + "'"};
    }

    const std::vector<Field>& all() const { return fields_; }

private:
    std::string_view directive_;
    std::vector<Field> fields_;
};

double number(const Field& f) {
    if (auto v = to_double(f.value)) return *v;
    throw LineError{f.value_column, "key '" + std::string(f.key) + "' expects a finite number, found '" +
                                        std::string(f.value) + "'"};
}

std::string interval(double lo, bool lo_open, double hi, bool hi_open) {
    std::ostringstream os;
    os << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
    return os.str();
}

double ranged(const Field& f, double lo, bool lo_open, double hi, bool hi_open) {
    const double v = number(f);
    const bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) {
        std::ostringstream os;
        os << "value " << v << " for '" << f.key << "' is outside " << interval(lo, lo_open, hi, hi_open);
        throw LineError{f.value_column, os.str()};
    }
    return v;
}

constexpr double kInf = INFINITY;

double unit_interval(const Field& f) { return ranged(f, 0.0, false, 1.0, false); }
double efficiency(const Field& f) { return ranged(f, 0.0, true, 1.0, false); }
double positive(const Field& f) { return ranged(f, 0.0, true, kInf, true); }
double non_negative(const Field& f) { return ranged(f, 0.0, false, kInf, true); }

double length(const Field& f) {
    std::string_view s = f.value;
    double scale = 1.0;
    if (s.ends_with("mm")) {
        scale = 1000.0;
        s.remove_suffix(2);
    } else if (s.ends_with("cm")) {
        scale = 100.0;
        s.remove_suffix(2);
    } else if (s.ends_with("m")) {
        s.remove_suffix(1);
    }
    const auto v = to_double(s);
    if (!v) throw LineError{f.value_column, "key '" + std::string(f.key) + "' expects a length such as 0.92m, 92cm or 920mm"};
    const double metres = *v / scale;
    if (!(metres > 0.0)) throw LineError{f.value_column, "length '" + std::string(f.key) + "' must be positive"};
    return metres;
}

ElementLine parse_element(std::string_view word, const std::vector<Token>& t) {
    if (word == "mirror") {
        Fields f(t, 1, word, {"R"});
        return MirrorLine{unit_interval(f.require("R"))};
    }
    if (word == "splitter") {
        Fields f(t, 1, word, {"R"});
        return SplitterLine{unit_interval(f.require("R"))};
    }
    if (word == "loss") {
        Fields f(t, 1, word, {"eta"});
        return LossLine{efficiency(f.require("eta"))};
    }
    if (word == "segment") {
        Fields f(t, 1, word, {"l", "eta", "ng", "offset"});
        SegmentLine s;
        for (const Field& x : f.all()) {
            if (x.key == "l") s.length = length(x);
            if (x.key == "eta") s.efficiency = efficiency(x);
            if (x.key == "ng") s.group_index = positive(x);
            if (x.key == "offset") s.offset_mhz = number(x);
        }
        f.require("l");
        f.require("eta");
        return s;
    }
    // atom
    Fields f(t, 1, word, {"g", "gamma", "gamma1d", "gammaprime", "chiral"});
    AtomLine a;
    std::optional<AtomLine::Form> form;
    for (const Field& x : f.all()) {
        if (x.key == "chiral") {
            if (x.value == "left")
                a.chirality = Chirality::couples_left_only;
            else if (x.value == "right")
                a.chirality = Chirality::couples_right_only;
            else
                throw LineError{x.value_column, "chiral expects left or right, found '" + std::string(x.value) + "'"};
            continue;
        }
        const bool coupling = x.key == "g" || x.key == "gamma";
        const auto this_form = coupling ? AtomLine::Form::coupling : AtomLine::Form::rates;
        if (form && *form != this_form)
            throw LineError{x.key_column, "atom takes either g/gamma or gamma1d/gammaprime, not both"};
        form = this_form;
        if (x.key == "g") a.first = non_negative(x);
        if (x.key == "gamma") a.second = positive(x);
        if (x.key == "gamma1d") a.first = non_negative(x);
        if (x.key == "gammaprime") a.second = positive(x);
    }
    a.form = form.value_or(AtomLine::Form::coupling);
    if (a.form == AtomLine::Form::coupling) {
        f.require("g");
        f.require("gamma");
    } else {
        f.require("gamma1d");
        f.require("gammaprime");
    }
    return a;
}

DriveLine parse_drive(const std::vector<Token>& t) {
    Fields f(t, 1, "drive", {"port", "amp", "phase"});
    DriveLine d;
    for (const Field& x : f.all()) {
        if (x.key == "port") {
            if (x.value == "left") d.port = Port::left;
            else if (x.value == "right") d.port = Port::right;
            else if (x.value == "up") d.port = Port::up;
            else if (x.value == "down") d.port = Port::down;
            else throw LineError{x.value_column, "port must be left, right, up or down"};
        }
        if (x.key == "amp") d.amplitude = non_negative(x);
        if (x.key == "phase") d.phase = number(x);
    }
    f.require("port");
    f.require("amp");
    return d;
}

SweepLine parse_sweep(const std::vector<Token>& t) {
    Fields f(t, 1, "sweep", {"from", "to", "points"});
    SweepLine s;
    for (const Field& x : f.all()) {
        if (x.key == "from") s.from_mhz = number(x);
        if (x.key == "to") s.to_mhz = number(x);
        if (x.key == "points") {
            unsigned long long n = 0;
            const auto [end, ec] = std::from_chars(x.value.data(), x.value.data() + x.value.size(), n);
            if (ec != std::errc() || end != x.value.data() + x.value.size() || n < 2 || n > 10'000'000)
                throw LineError{x.value_column, "points must be an integer in [2, 10000000]"};
            s.points = static_cast<std::size_t>(n);
        }
    }
    f.require("from");
    const Field& to = f.require("to");
    f.require("points");
    if (!(s.from_mhz < s.to_mhz)) throw LineError{to.value_column, "sweep needs from < to"};
    return s;
}

Model parse_model(const std::vector<Token>& t) {
    if (t.size() < 2) throw LineError{1, "model requires one of tm, qo, both"};
    if (t.size() > 2) throw LineError{t[2].column, "model takes a single value"};
    if (t[1].text == "tm") return Model::tm;
    if (t[1].text == "qo") return Model::qo;
    if (t[1].text == "both") return Model::both;
    throw LineError{t[1].column, "model must be tm, qo or both, found '" + std::string(t[1].text) + "'"};
}

PresetRef parse_preset(const std::vector<Token>& t) {
    if (t.size() < 2) throw LineError{1, "preset requires a name"};
    const PresetInfo* info = find_preset(t[1].text);
    if (!info) {
        std::string names;
        for (const PresetInfo& p : presets()) names += (names.empty() ? "" : ", ") + p.name;
        throw LineError{t[1].column, "unknown preset '" + std::string(t[1].text) + "' (known: " + names + ")"};
    }
    std::vector<std::string_view> keys;
    for (const PresetKey& k : info->keys) keys.push_back(k.name);
    PresetRef ref{info->name, {}};
    for (std::size_t k = 2; k < t.size(); ++k) {
        const Token& tok = t[k];
        const auto eq = tok.text.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == tok.text.size())
            throw LineError{tok.column, "expected key=value, found '" + std::string(tok.text) + "'"};
        const Field field{tok.text.substr(0, eq), tok.text.substr(eq + 1), tok.column,
                          tok.column + static_cast<int>(eq) + 1};
        if (std::find(keys.begin(), keys.end(), field.key) == keys.end())
            throw LineError{tok.column, "preset " + info->name + " has no key '" + std::string(field.key) + "'"};
        for (const auto& [name, value] : ref.overrides)
            if (name == field.key) throw LineError{tok.column, "duplicate key '" + std::string(field.key) + "'"};
        ref.overrides.emplace_back(std::string(field.key), number(field));
        try {
            (void)expand_preset(ref);
        } catch (const Error& e) {
            throw LineError{field.value_column, e.what()};
        }
    }
    return ref;
}

bool is_element(std::string_view w) {
    return w == "mirror" || w == "segment" || w == "atom" || w == "splitter" || w == "loss";
}

}  // namespace

std::string format(const Diagnostic& d, std::string_view source_name) {
    std::ostringstream os;
    os << source_name << ':' << d.line << ':' << d.column << ": "
       << (d.severity == Severity::error ? "error" : "warning") << ": " << d.message;
    if (!d.source_excerpt.empty()) {
        os << "\n  " << d.source_excerpt << "\n  " << std::string(static_cast<std::size_t>(std::max(0, d.column - 1)), ' ')
           << '^';
    }
    return os.str();
}

bool ParseResult::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::error; });
}

ParseResult parse(std::string_view text) {
    ParseResult res;
    Document& doc = res.document;
    std::map<Port, int> drive_lines;
    int splitter_line = 0, sweep_line = 0, model_line = 0, first_element_line = 0;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::vector<Token> tokens = tokenize(line);
        if (tokens.empty()) continue;
        auto fail = [&](int column, std::string message) {
            res.diagnostics.push_back({line_no, column, Severity::error, std::move(message), std::string(line)});
        };
        const std::string_view word = tokens[0].text;
        try {
            if (is_element(word)) {
                ElementLine e = parse_element(word, tokens);
                if (std::holds_alternative<SplitterLine>(e) && splitter_line != 0)
                    throw LineError{tokens[0].column, "splitter appears twice (first on line " +
                                                          std::to_string(splitter_line) + "); only one is supported"};
                if (doc.preset)
                    throw LineError{tokens[0].column, "network elements cannot follow a preset; use preset overrides"};
                if (std::holds_alternative<SplitterLine>(e)) splitter_line = line_no;
                if (first_element_line == 0) first_element_line = line_no;
                doc.elements.push_back({std::move(e), line_no});
            } else if (word == "drive") {
                DriveLine d = parse_drive(tokens);
                if (auto it = drive_lines.find(d.port); it != drive_lines.end())
                    throw LineError{tokens[0].column, std::string("port ") + to_string(d.port) +
                                                          " is already driven on line " + std::to_string(it->second)};
                drive_lines[d.port] = line_no;
                doc.drives.push_back({d, line_no});
            } else if (word == "sweep") {
                SweepLine s = parse_sweep(tokens);
                if (sweep_line != 0)
                    throw LineError{tokens[0].column, "duplicate sweep (first on line " + std::to_string(sweep_line) + ")"};
                sweep_line = line_no;
                doc.sweep = s;
            } else if (word == "model") {
                Model m = parse_model(tokens);
                if (model_line != 0)
                    throw LineError{tokens[0].column, "duplicate model (first on line " + std::to_string(model_line) + ")"};
                model_line = line_no;
                doc.model = m;
            } else if (word == "preset") {
                PresetRef ref = parse_preset(tokens);
                if (doc.preset) throw LineError{tokens[0].column, "only one preset per document"};
                if (first_element_line != 0)
                    throw LineError{tokens[0].column, "preset cannot be combined with network elements (line " +
                                                          std::to_string(first_element_line) + ")"};
                doc.preset = std::move(ref);
                doc.preset_line = line_no;
            } else {
                throw LineError{tokens[0].column, "unknown directive '" + std::string(word) + "'"};
            }
        } catch (const LineError& e) {
            fail(e.column, e.message);
        }
    }

    if (doc.elements.empty() && !doc.preset && res.ok())
        res.diagnostics.push_back({1, 1, Severity::error, "no network elements", ""});
    return res;
}

const char* to_string(Port p) {
    switch (p) {
        case Port::left: return "left";
        case Port::right: return "right";
        case Port::up: return "up";
        case Port::down: return "down";
    }
    return "?";
}

const char* to_string(Model m) {
    switch (m) {
        case Model::tm: return "tm";
        case Model::qo: return "qo";
        case Model::both: return "both";
    }
    return "?";
}

}  // namespace fibernet::netlist
