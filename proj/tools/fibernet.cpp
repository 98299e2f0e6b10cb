// fibernet: spectra of fiber cavity-QED networks from .fnet descriptions.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fibernet/compare.hpp"
#include "fibernet/error.hpp"
#include "fibernet/netlist.hpp"
#include "fibernet/qo_model.hpp"
#include "fibernet/validation.hpp"

namespace {

using namespace fibernet;

enum Exit { exit_ok = 0, exit_input = 1, exit_flagged = 2, exit_validation = 3 };

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) out += (out.empty() ? "" : ";") + sig9(x);
    return out;
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            if (const auto* d = std::get_if<double>(&row[c]))
                os << sig9(*d);
            else
                os << std::get<std::string>(row[c]);
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::json doc;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Cell& cell : row) {
            if (const auto* d = std::get_if<double>(&cell)) {
                if (std::isfinite(*d))
                    r.push_back(std::strtod(sig9(*d).c_str(), nullptr));
                else
                    r.push_back(nullptr);
            } else {
                r.push_back(std::get<std::string>(cell));
            }
        }
        doc["rows"].push_back(std::move(r));
    }
    os << doc.dump(1) << '\n';
}

struct Options {
    std::string input;
    std::string format = "csv";
    std::string output;
    unsigned jobs = 0;
};

unsigned job_count(const Options& o) {
    if (o.jobs > 0) return o.jobs;
    if (const char* env = std::getenv("FIBERNET_JOBS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return 1;
}

int emit(const Options& o, const Table& t) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) {
            std::cerr << "fibernet: cannot write " << o.output << '\n';
            return exit_input;
        }
        os = &file;
    }
    if (o.format == "json")
        write_json(*os, t);
    else
        write_csv(*os, t);
    return exit_ok;
}

struct Loaded {
    std::string text;
    netlist::Resolved doc;
};

// Reads, parses and resolves the input; prints diagnostics and returns
// nullopt on failure.
std::optional<Loaded> load(const Options& o) {
    Loaded l;
    const std::string name = o.input.empty() ? "<stdin>" : o.input;
    if (o.input.empty()) {
        l.text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(o.input);
        if (!in) {
            std::cerr << "fibernet: cannot read " << o.input << '\n';
            return std::nullopt;
        }
        l.text.assign(std::istreambuf_iterator<char>(in), {});
    }
    const netlist::ParseResult parsed = netlist::parse(l.text);
    for (const auto& d : parsed.diagnostics) std::cerr << netlist::format(d, name) << '\n';
    if (!parsed.ok()) return std::nullopt;
    netlist::ResolveResult r = netlist::resolve(parsed.document, l.text);
    for (const auto& d : r.diagnostics) std::cerr << netlist::format(d, name) << '\n';
    if (!r.resolved) return std::nullopt;
    l.doc = std::move(*r.resolved);
    return l;
}

int run_spectrum(const Options& o) {
    const auto l = load(o);
    if (!l) return exit_input;
    const netlist::Resolved& d = l->doc;
    const std::vector<double> grid = d.sweep.detunings();
    const unsigned jobs = job_count(o);

    std::vector<std::pair<std::string, SpectraResult>> models;
    if (d.model != netlist::Model::qo) models.emplace_back("tm", tm_response(d.network, d.drive, grid, jobs));
    if (d.model != netlist::Model::tm) models.emplace_back("qo", qo_response(d.network, d.drive, grid, jobs));

    Table t;
    t.columns.push_back("detuning_MHz");
    for (const auto& [tag, res] : models)
        for (const PortSpectrum& p : res.ports) t.columns.push_back(tag + "_" + p.name);
    t.columns.push_back("flag");
    bool flagged = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{angular_to_mhz(grid[i])};
        int flag = 0;
        for (const auto& [tag, res] : models) {
            for (const PortSpectrum& p : res.ports) row.emplace_back(p.power[i]);
            flag = std::max(flag, static_cast<int>(res.flags[i]));
        }
        row.emplace_back(std::to_string(flag));
        flagged = flagged || flag != 0;
        t.rows.push_back(std::move(row));
    }
    if (const int rc = emit(o, t); rc != exit_ok) return rc;
    if (flagged) std::cerr << "fibernet: some sweep points are flagged (see flag column)\n";
    return flagged ? exit_flagged : exit_ok;
}

std::vector<double> positions_mhz(const std::vector<Peak>& peaks) {
    std::vector<double> out;
    for (const Peak& p : peaks) out.push_back(angular_to_mhz(p.position));
    return out;
}

int run_compare(const Options& o) {
    const auto l = load(o);
    if (!l) return exit_input;
    const netlist::Resolved& d = l->doc;
    const std::vector<double> grid = d.sweep.detunings();
    const unsigned jobs = job_count(o);
    const SpectraResult tm = tm_response(d.network, d.drive, grid, jobs);
    const SpectraResult qo = qo_response(d.network, d.drive, grid, jobs);

    Table t;
    t.columns = {"port", "max_abs_diff", "tm_peaks_MHz", "qo_peaks_MHz", "peak_shift_MHz", "qualitative_mismatch", "reason"};
    for (const PortComparison& c : compare_spectra(tm, qo)) {
        std::vector<double> shifts;
        for (const PeakMatch& m : c.matches) shifts.push_back(angular_to_mhz(m.tm_position - m.qo_position));
        t.rows.push_back({c.port, c.max_abs_diff, join(positions_mhz(c.tm_peaks)), join(positions_mhz(c.qo_peaks)),
                          join(shifts), std::string(c.qualitative_mismatch ? "1" : "0"), c.reason});
    }
    if (const int rc = emit(o, t); rc != exit_ok) return rc;
    return tm.any_flagged() ? exit_flagged : exit_ok;
}

int run_modes(const Options& o) {
    const auto l = load(o);
    if (!l) return exit_input;
    const netlist::Resolved& d = l->doc;
    QoParams p;
    try {
        p = std::visit([&](const auto& n) { return qo_params_from_network(n, d.drive); }, d.network);
    } catch (const Error& e) {
        std::cerr << "fibernet: " << e.what() << '\n';
        return exit_input;
    }
    Table t;
    t.columns = {"mode", "detuning_MHz", "linewidth_MHz", "w_sigma1", "w_a1", "w_b", "w_a2", "w_sigma2"};
    int k = 0;
    for (const NormalMode& m : normal_modes(p)) {
        std::vector<Cell> row{std::to_string(k++), angular_to_mhz(m.detuning), angular_to_mhz(m.linewidth)};
        for (const Complex& c : m.vector) row.emplace_back(std::norm(c));
        t.rows.push_back(std::move(row));
    }
    return emit(o, t);
}

int run_validate(const Options& o) {
    if (!o.input.empty() && !load(o)) return exit_input;
    Table t;
    t.columns = {"suite", "passed", "max_error", "tolerance", "checks"};
    bool ok = true;
    for (const SuiteResult& s : run_validation_suites()) {
        ok = ok && s.passed;
        t.rows.push_back({s.name, std::string(s.passed ? "1" : "0"), s.max_error, s.tolerance,
                          std::to_string(s.checks)});
    }
    if (const int rc = emit(o, t); rc != exit_ok) return rc;
    return ok ? exit_ok : exit_validation;
}

int run_presets(const Options& o) {
    Table t;
    t.columns = {"preset", "key", "default", "meaning"};
    for (const netlist::PresetInfo& p : netlist::presets())
        for (const netlist::PresetKey& k : p.keys) t.rows.push_back({p.name, k.name, k.default_value, k.meaning});
    return emit(o, t);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibernet: transfer-matrix and single-mode spectra of fiber cavity-QED networks"};
    Options o;
    app.add_option("--input", o.input, "netlist file (.fnet); standard input when omitted");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", o.output, "output file; standard output when omitted");
    app.add_option("--jobs", o.jobs, "worker threads for sweeps (FIBERNET_JOBS when omitted)");
    app.require_subcommand(1, 1);
    app.fallthrough();
    auto* spectrum = app.add_subcommand("spectrum", "sweep the network and print port powers");
    auto* compare = app.add_subcommand("compare", "compare transfer-matrix and single-mode spectra");
    auto* modes = app.add_subcommand("modes", "normal modes of the single-mode model");
    auto* validate = app.add_subcommand("validate", "run the built-in invariant suites");
    auto* presets = app.add_subcommand("presets", "list the built-in parameter sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_input;
    }

    try {
        if (spectrum->parsed()) return run_spectrum(o);
        if (compare->parsed()) return run_compare(o);
        if (modes->parsed()) return run_modes(o);
        if (validate->parsed()) return run_validate(o);
        if (presets->parsed()) return run_presets(o);
    } catch (const Error& e) {
        std::cerr << "fibernet: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}
