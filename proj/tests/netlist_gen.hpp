#pragma once

// Random valid netlist documents and single-token corruptions.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fibernet/netlist.hpp"

namespace fibernet::test {

inline netlist::Document random_document(std::mt19937_64& rng) {
    using namespace netlist;
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto coin = [&] { return pick(2) == 1; };

    Document d;
    int line = 1;
    if (pick(4) == 0) {
        const std::vector<PresetInfo>& all = presets();
        const PresetInfo& p = all[static_cast<std::size_t>(pick(static_cast<int>(all.size())))];
        PresetRef ref{p.name, {}};
        for (const PresetKey& k : p.keys)
            if (coin()) ref.overrides.emplace_back(k.name, k.default_value * u(0.5, 1.0));
        d.preset = ref;
        d.preset_line = line++;
    } else {
        bool splitter = false;
        const int n = 1 + pick(8);
        for (int i = 0; i < n; ++i) {
            ElementLine e;
            switch (pick(5)) {
                case 0: e = MirrorLine{u(0, 1)}; break;
                case 1: {
                    SegmentLine s{u(0.01, 5), u(0.5, 1), std::nullopt, std::nullopt};
                    if (coin()) s.group_index = u(1.3, 1.6);
                    if (coin()) s.offset_mhz = u(-10, 10);
                    e = s;
                    break;
                }
                case 2: {
                    AtomLine a{coin() ? AtomLine::Form::coupling : AtomLine::Form::rates, u(0, 10), u(0.5, 6),
                               Chirality::symmetric};
                    if (a.form == AtomLine::Form::coupling && coin())
                        a.chirality = coin() ? Chirality::couples_left_only : Chirality::couples_right_only;
                    e = a;
                    break;
                }
                case 3:
                    if (!splitter) {
                        e = SplitterLine{u(0, 1)};
                        splitter = true;
                        break;
                    }
                    [[fallthrough]];
                default: e = LossLine{u(0.1, 1)}; break;
            }
            d.elements.push_back({e, line++});
        }
    }
    for (Port p : {Port::left, Port::right, Port::up, Port::down}) {
        if (pick(3) != 0) continue;
        DriveLine dl{p, u(0, 2), std::nullopt};
        if (coin()) dl.phase = u(-3.2, 3.2);
        d.drives.push_back({dl, line++});
    }
    if (coin()) {
        const double a = u(-60, 0);
        d.sweep = SweepLine{a, a + u(0.5, 60), static_cast<std::size_t>(2 + pick(5000))};
    }
    if (coin()) d.model = static_cast<Model>(pick(3));
    return d;
}

struct Corruption {
    std::string text;
    int line;       // 1-based
    int first_col;  // 1-based, inclusive range the error must point into
    int last_col;
};

// Replaces exactly one whitespace-separated token of a valid document with
// something that cannot parse.
inline Corruption corrupt_one_token(const std::string& text, std::mt19937_64& rng) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    const auto li = std::uniform_int_distribution<std::size_t>(0, lines.size() - 1)(rng);
    std::string& l = lines[li];

    struct Tok {
        std::size_t pos, len;
    };
    std::vector<Tok> toks;
    for (std::size_t i = 0; i < l.size();) {
        if (l[i] == ' ') {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < l.size() && l[j] != ' ') ++j;
        toks.push_back({i, j - i});
        i = j;
    }
    const Tok t = toks[std::uniform_int_distribution<std::size_t>(0, toks.size() - 1)(rng)];
    const std::string tok = l.substr(t.pos, t.len);
    const std::size_t eq = tok.find('=');
    std::string repl;
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: repl = "@bad"; break;
        case 1: repl = eq == std::string::npos ? "zz9" : tok.substr(0, eq + 1) + "zz9"; break;
        default: repl = eq == std::string::npos ? "=" : "bogus" + tok.substr(eq); break;
    }
    l.replace(t.pos, t.len, repl);
    std::string out;
    for (const std::string& x : lines) out += x + "\n";
    const int first = static_cast<int>(t.pos) + 1;
    return {out, static_cast<int>(li) + 1, first, first + static_cast<int>(repl.size()) - 1};
}

}  // namespace fibernet::test
