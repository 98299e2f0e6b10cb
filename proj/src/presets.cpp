#include <cmath>
#include <map>
#include <sstream>

#include "fibernet/error.hpp"
#include "fibernet/netlist.hpp"

namespace fibernet::netlist {

namespace {

enum class Range { unit, efficiency, positive, non_negative };

struct KeySpec {
    PresetKey key;
    Range range;
};

struct Definition {
    PresetInfo info;
    std::vector<Range> ranges;
};

Definition make(std::string name, std::string description, std::vector<KeySpec> specs) {
    Definition d;
    d.info.name = std::move(name);
    d.info.description = std::move(description);
    for (KeySpec& s : specs) {
        d.info.keys.push_back(std::move(s.key));
        d.ranges.push_back(s.range);
    }
    return d;
}

const std::vector<Definition>& definitions() {
    static const std::vector<Definition> defs = {
        make("ccqed-paper", "two fiber cavities joined by a fiber with a 4-port tap at its midpoint, one atom per cavity",
             {{{"R1", 0.8, "mirror 1 reflectance"}, Range::unit},
              {{"R2", 0.65, "mirror 2 reflectance"}, Range::unit},
              {{"R3", 0.8, "mirror 3 reflectance"}, Range::unit},
              {{"R4", 0.85, "mirror 4 reflectance"}, Range::unit},
              {{"l1", 0.92, "cavity 1 length (m)"}, Range::positive},
              {{"l2", 1.38, "cavity 2 length (m)"}, Range::positive},
              {{"lf", 1.8, "connecting fiber length (m)"}, Range::positive},
              {{"eta1", 0.97, "cavity 1 single-pass efficiency"}, Range::efficiency},
              {{"eta2", 0.97, "cavity 2 single-pass efficiency"}, Range::efficiency},
              {{"etaf", 0.97, "connecting fiber single-pass efficiency"}, Range::efficiency},
              {{"Rbs", 0.01, "tap reflectance"}, Range::unit},
              {{"g1", 6.0, "atom-cavity coupling in cavity 1 (MHz)"}, Range::non_negative},
              {{"g2", 7.0, "atom-cavity coupling in cavity 2 (MHz)"}, Range::non_negative},
              {{"gamma", 2.65, "atomic coherence decay (MHz)"}, Range::positive},
              {{"ng", kDefaultGroupIndex, "fiber group index"}, Range::positive}}),
        make("fabry-perot", "single empty fiber Fabry-Perot cavity",
             {{{"R1", 0.9, "left mirror reflectance"}, Range::unit},
              {{"R2", 0.65, "right mirror reflectance"}, Range::unit},
              {{"l", 2.0, "cavity length (m)"}, Range::positive},
              {{"eta", 0.98, "single-pass efficiency"}, Range::efficiency},
              {{"ng", kDefaultGroupIndex, "fiber group index"}, Range::positive}}),
        make("cavity-qed", "single fiber cavity with one atom at its centre",
             {{{"R1", 0.7, "left mirror reflectance"}, Range::unit},
              {{"R2", 0.7, "right mirror reflectance"}, Range::unit},
              {{"l", 2.0, "cavity length (m)"}, Range::positive},
              {{"eta", 0.98, "single-pass efficiency"}, Range::efficiency},
              {{"g", 7.0, "atom-cavity coupling (MHz)"}, Range::non_negative},
              {{"gamma", 2.65, "atomic coherence decay (MHz)"}, Range::positive},
              {{"ng", kDefaultGroupIndex, "fiber group index"}, Range::positive}}),
    };
    return defs;
}

const Definition* find_definition(std::string_view name) {
    for (const Definition& d : definitions())
        if (d.info.name == name) return &d;
    return nullptr;
}

void check(const std::string& key, double v, Range r) {
    bool ok = std::isfinite(v);
    const char* span = "";
    switch (r) {
        case Range::unit: ok = ok && v >= 0.0 && v <= 1.0; span = "[0, 1]"; break;
        case Range::efficiency: ok = ok && v > 0.0 && v <= 1.0; span = "(0, 1]"; break;
        case Range::positive: ok = ok && v > 0.0; span = "(0, inf)"; break;
        case Range::non_negative: ok = ok && v >= 0.0; span = "[0, inf)"; break;
    }
    if (!ok) {
        std::ostringstream os;
        os << "value " << v << " for '" << key << "' is outside " << span;
        throw_invalid(os.str());
    }
}

// half of a segment, carrying half of its single-pass loss
SegmentLine half(double length, double eta, double ng) {
    return SegmentLine{0.5 * length, std::sqrt(eta), ng, std::nullopt};
}

void cavity(std::vector<ElementLine>& out, double length, double eta, double ng, double g, double gamma) {
    out.push_back(half(length, eta, ng));
    if (g > 0.0) out.push_back(AtomLine{AtomLine::Form::coupling, g, gamma, Chirality::symmetric});
    out.push_back(half(length, eta, ng));
}

}  // namespace

const std::vector<PresetInfo>& presets() {
    static const std::vector<PresetInfo> list = [] {
        std::vector<PresetInfo> v;
        for (const Definition& d : definitions()) v.push_back(d.info);
        return v;
    }();
    return list;
}

const PresetInfo* find_preset(std::string_view name) {
    for (const PresetInfo& p : presets())
        if (p.name == name) return &p;
    return nullptr;
}

PresetExpansion expand_preset(const PresetRef& ref) {
    const Definition* def = find_definition(ref.name);
    if (!def) throw_invalid("unknown preset '" + ref.name + "'");
    std::map<std::string, double> v;
    for (const PresetKey& k : def->info.keys) v[k.name] = k.default_value;
    for (const auto& [key, value] : ref.overrides) {
        std::size_t i = 0;
        while (i < def->info.keys.size() && def->info.keys[i].name != key) ++i;
        if (i == def->info.keys.size()) throw_invalid("preset " + ref.name + " has no key '" + key + "'");
        check(key, value, def->ranges[i]);
        v[key] = value;
    }

    PresetExpansion x;
    x.drives = {DriveLine{Port::left, 1.0, std::nullopt}};
    x.model = Model::both;
    if (ref.name == "ccqed-paper") {
        const double ng = v["ng"];
        x.elements.push_back(MirrorLine{v["R1"]});
        cavity(x.elements, v["l1"], v["eta1"], ng, v["g1"], v["gamma"]);
        x.elements.push_back(MirrorLine{v["R2"]});
        x.elements.push_back(half(v["lf"], v["etaf"], ng));
        x.elements.push_back(SplitterLine{v["Rbs"]});
        x.elements.push_back(half(v["lf"], v["etaf"], ng));
        x.elements.push_back(MirrorLine{v["R3"]});
        cavity(x.elements, v["l2"], v["eta2"], ng, v["g2"], v["gamma"]);
        x.elements.push_back(MirrorLine{v["R4"]});
        x.sweep = {-25.0, 25.0, 2001};
    } else if (ref.name == "fabry-perot") {
        x.elements.push_back(MirrorLine{v["R1"]});
        x.elements.push_back(SegmentLine{v["l"], v["eta"], v["ng"], std::nullopt});
        x.elements.push_back(MirrorLine{v["R2"]});
        x.sweep = {-10.0, 10.0, 2001};
    } else {
        x.elements.push_back(MirrorLine{v["R1"]});
        cavity(x.elements, v["l"], v["eta"], v["ng"], v["g"], v["gamma"]);
        x.elements.push_back(MirrorLine{v["R2"]});
        x.sweep = {-20.0, 20.0, 2001};
    }
    return x;
}

}  // namespace fibernet::netlist
