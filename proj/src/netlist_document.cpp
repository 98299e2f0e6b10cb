#include <charconv>
#include <cmath>
#include <sstream>

#include "fibernet/error.hpp"
#include "fibernet/netlist.hpp"
#include "fibernet/qo_model.hpp"

namespace fibernet::netlist {

namespace {

std::string num(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? end : buf);
}

const char* chiral_word(Chirality c) {
    return c == Chirality::couples_left_only ? "left" : c == Chirality::couples_right_only ? "right" : nullptr;
}

struct Writer {
    std::ostringstream os;

    void operator()(const MirrorLine& m) { os << "mirror R=" << num(m.reflectance); }
    void operator()(const SplitterLine& s) { os << "splitter R=" << num(s.reflectance); }
    void operator()(const LossLine& l) { os << "loss eta=" << num(l.efficiency); }
    void operator()(const SegmentLine& s) {
        os << "segment l=" << num(s.length) << "m eta=" << num(s.efficiency);
        if (s.group_index) os << " ng=" << num(*s.group_index);
        if (s.offset_mhz) os << " offset=" << num(*s.offset_mhz);
    }
    void operator()(const AtomLine& a) {
        if (a.form == AtomLine::Form::coupling)
            os << "atom g=" << num(a.first) << " gamma=" << num(a.second);
        else
            os << "atom gamma1d=" << num(a.first) << " gammaprime=" << num(a.second);
        if (const char* c = chiral_word(a.chirality)) os << " chiral=" << c;
    }
};

std::string excerpt(std::string_view text, int line) {
    int n = 1;
    std::size_t pos = 0;
    while (n < line && pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) return {};
        pos = nl + 1;
        ++n;
    }
    if (pos > text.size()) return {};
    const std::size_t nl = text.find('\n', pos);
    return std::string(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
}

struct Located {
    ElementLine element;
    int line;
};

struct Failure {
    int line;
    std::string message;
};

double group_velocity(const SegmentLine& s) { return kSpeedOfLight / s.group_index.value_or(kDefaultGroupIndex); }

// Time of flight through the segments between the mirrors that enclose position k.
double enclosing_flight_time(const std::vector<Located>& all, std::size_t k) {
    std::size_t lo = k, hi = k;
    bool left = false, right = false;
    while (lo > 0) {
        --lo;
        if (std::holds_alternative<MirrorLine>(all[lo].element)) {
            left = true;
            break;
        }
    }
    while (++hi < all.size()) {
        if (std::holds_alternative<MirrorLine>(all[hi].element)) {
            right = true;
            break;
        }
    }
    if (!left || !right)
        throw Failure{all[k].line, std::string("atom g= needs an enclosing cavity to convert g into Gamma_1D; no mirror to the ") +
                                       (left ? "right" : "left")};
    double tau = 0.0;
    for (std::size_t j = lo + 1; j < hi; ++j)
        if (const auto* s = std::get_if<SegmentLine>(&all[j].element)) tau += s->length / group_velocity(*s);
    if (!(tau > 0.0)) throw Failure{all[k].line, "atom g= needs an enclosing cavity of nonzero length"};
    return tau;
}

Element convert(const std::vector<Located>& all, std::size_t k) {
    const ElementLine& e = all[k].element;
    if (const auto* m = std::get_if<MirrorLine>(&e)) return MirrorParams::lossless(m->reflectance);
    if (const auto* l = std::get_if<LossLine>(&e)) return LossParams{l->efficiency};
    if (const auto* s = std::get_if<SegmentLine>(&e))
        return SegmentParams{s->length, s->efficiency, group_velocity(*s), mhz_to_angular(s->offset_mhz.value_or(0.0))};
    const auto& a = std::get<AtomLine>(e);
    AtomParams p;
    p.chirality = a.chirality;
    if (a.form == AtomLine::Form::rates) {
        p.guided_decay = mhz_to_angular(a.first);
        p.external_decay = mhz_to_angular(a.second);
    } else {
        const double g = mhz_to_angular(a.first);
        p.guided_decay = enclosing_flight_time(all, k) * g * g;
        p.external_decay = 2.0 * mhz_to_angular(a.second);
    }
    return p;
}

}  // namespace

std::string serialize(const Document& doc) {
    std::ostringstream os;
    if (doc.preset) {
        os << "preset " << doc.preset->name;
        for (const auto& [k, v] : doc.preset->overrides) os << ' ' << k << '=' << num(v);
        os << '\n';
    }
    for (const ElementStatement& s : doc.elements) {
        Writer w;
        std::visit(w, s.element);
        os << w.os.str() << '\n';
    }
    for (const DriveStatement& d : doc.drives) {
        os << "drive port=" << to_string(d.drive.port) << " amp=" << num(d.drive.amplitude);
        if (d.drive.phase) os << " phase=" << num(*d.drive.phase);
        os << '\n';
    }
    if (doc.sweep)
        os << "sweep from=" << num(doc.sweep->from_mhz) << " to=" << num(doc.sweep->to_mhz)
           << " points=" << doc.sweep->points << '\n';
    if (doc.model) os << "model " << to_string(*doc.model) << '\n';
    return os.str();
}

ResolveResult resolve(const Document& doc, std::string_view text) {
    ResolveResult out;
    auto fail = [&](int line, std::string message) {
        out.diagnostics.push_back({line, 1, Severity::error, std::move(message), excerpt(text, line)});
        return out;
    };

    std::vector<Located> all;
    std::vector<DriveStatement> drives = doc.drives;
    SweepLine sweep{-50.0, 50.0, 1001};
    Model model = Model::tm;
    if (doc.preset) {
        PresetExpansion x;
        try {
            x = expand_preset(*doc.preset);
        } catch (const Error& e) {
            return fail(doc.preset_line, e.what());
        }
        for (ElementLine& e : x.elements) all.push_back({std::move(e), doc.preset_line});
        if (drives.empty())
            for (const DriveLine& d : x.drives) drives.push_back({d, doc.preset_line});
        sweep = x.sweep;
        model = x.model;
    }
    for (const ElementStatement& s : doc.elements) all.push_back({s.element, s.line});
    if (doc.sweep) sweep = *doc.sweep;
    if (doc.model) model = *doc.model;
    if (all.empty()) return fail(1, "no network elements");

    std::optional<std::size_t> split_at;
    SplitterParams splitter;
    std::vector<Element> left, right;
    try {
        for (std::size_t k = 0; k < all.size(); ++k) {
            if (const auto* s = std::get_if<SplitterLine>(&all[k].element)) {
                if (k == 0 || k + 1 == all.size())
                    throw Failure{all[k].line, "splitter needs network elements on both sides"};
                split_at = k;
                splitter.reflectance = s->reflectance;
                continue;
            }
            (split_at ? right : left).push_back(convert(all, k));
        }
    } catch (const Failure& f) {
        return fail(f.line, f.message);
    }

    Resolved r;
    if (split_at)
        r.network = SplitNetwork{{"S1", std::move(left)}, {"S2", std::move(right)}, splitter};
    else
        r.network = NetworkSpec{"chain", std::move(left)};

    if (drives.empty()) r.drive.e1_in = 1.0;
    for (const DriveStatement& d : drives) {
        const Complex amp = std::polar(d.drive.amplitude, d.drive.phase.value_or(0.0));
        switch (d.drive.port) {
            case Port::left: r.drive.e1_in = amp; break;
            case Port::right: r.drive.e2_in = amp; break;
            case Port::up: r.drive.eu_in = amp; break;
            case Port::down: r.drive.ed_in = amp; break;
        }
        if ((d.drive.port == Port::up || d.drive.port == Port::down) && !split_at)
            return fail(d.line, std::string("port ") + to_string(d.drive.port) + " needs a splitter in the network");
    }
    if (!(r.drive.total_power() > 0.0)) return fail(drives.empty() ? 1 : drives.front().line, "all drive amplitudes are zero");

    r.sweep = {mhz_to_angular(sweep.from_mhz), mhz_to_angular(sweep.to_mhz), sweep.points, DriveSide::left};
    r.model = model;

    if (model != Model::tm) {
        try {
            std::visit([&](const auto& net) { (void)qo_params_from_network(net, r.drive); }, r.network);
        } catch (const Error& e) {
            return fail(1, std::string("network has no quantum-optical counterpart: ") + e.what());
        }
    }
    try {
        std::visit([](const auto& net) { validate(net); }, r.network);
    } catch (const Error& e) {
        return fail(1, e.what());
    }
    out.resolved = std::move(r);
    return out;
}

}  // namespace fibernet::netlist
