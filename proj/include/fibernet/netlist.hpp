#pragma once

// Line-oriented network description (.fnet). Values are kept in file units
// (MHz of ordinary frequency, metres, radians) in the syntax tree; resolve()
// converts them to library units.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fibernet/splitter.hpp"

namespace fibernet::netlist {

struct MirrorLine {
    double reflectance = 0.0;
    bool operator==(const MirrorLine&) const = default;
};

struct SegmentLine {
    double length = 0.0;  // m
    double efficiency = 1.0;
    std::optional<double> group_index;
    std::optional<double> offset_mhz;
    bool operator==(const SegmentLine&) const = default;
};

struct AtomLine {
    enum class Form { coupling, rates };
    Form form = Form::coupling;
    double first = 0.0;   // g (coupling form) or Gamma_1D (rates form), MHz
    double second = 0.0;  // gamma (coupling form) or Gamma' (rates form), MHz
    Chirality chirality = Chirality::symmetric;
    bool operator==(const AtomLine&) const = default;
};

struct SplitterLine {
    double reflectance = 0.0;
    bool operator==(const SplitterLine&) const = default;
};

struct LossLine {
    double efficiency = 1.0;
    bool operator==(const LossLine&) const = default;
};

using ElementLine = std::variant<MirrorLine, SegmentLine, AtomLine, SplitterLine, LossLine>;

enum class Port { left, right, up, down };

struct DriveLine {
    Port port = Port::left;
    double amplitude = 1.0;
    std::optional<double> phase;
    bool operator==(const DriveLine&) const = default;
};

struct SweepLine {
    double from_mhz = 0.0;
    double to_mhz = 0.0;
    std::size_t points = 2;
    bool operator==(const SweepLine&) const = default;
};

enum class Model { tm, qo, both };

struct PresetRef {
    std::string name;
    std::vector<std::pair<std::string, double>> overrides;
    bool operator==(const PresetRef&) const = default;
};

struct ElementStatement {
    ElementLine element;
    int line = 0;
    bool operator==(const ElementStatement& o) const { return element == o.element; }
};

struct DriveStatement {
    DriveLine drive;
    int line = 0;
    bool operator==(const DriveStatement& o) const { return drive == o.drive; }
};

struct Document {
    std::optional<PresetRef> preset;
    std::vector<ElementStatement> elements;
    std::vector<DriveStatement> drives;
    std::optional<SweepLine> sweep;
    std::optional<Model> model;
    int preset_line = 0;

    bool operator==(const Document& o) const {
        return preset == o.preset && elements == o.elements && drives == o.drives && sweep == o.sweep &&
               model == o.model;
    }
};

enum class Severity { error, warning };

struct Diagnostic {
    int line = 1;
    int column = 1;
    Severity severity = Severity::error;
    std::string message;
    std::string source_excerpt;
};

std::string format(const Diagnostic& d, std::string_view source_name = "<input>");

struct ParseResult {
    Document document;
    std::vector<Diagnostic> diagnostics;

    bool ok() const;
};

ParseResult parse(std::string_view text);

std::string serialize(const Document& doc);

using Network = std::variant<NetworkSpec, SplitNetwork>;

struct Resolved {
    Network network;
    DriveVector drive;
    SweepSpec sweep;
    Model model = Model::tm;
};

struct ResolveResult {
    std::optional<Resolved> resolved;
    std::vector<Diagnostic> diagnostics;
};

// Expands the preset, converts units, resolves atom couplings against their
// enclosing cavity and checks cross-line constraints.
ResolveResult resolve(const Document& doc, std::string_view text = {});

const char* to_string(Port p);
const char* to_string(Model m);

// Presets ------------------------------------------------------------------

struct PresetKey {
    std::string name;
    double default_value;
    std::string meaning;
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::vector<PresetKey> keys;
};

const std::vector<PresetInfo>& presets();
const PresetInfo* find_preset(std::string_view name);

struct PresetExpansion {
    std::vector<ElementLine> elements;
    std::vector<DriveLine> drives;
    SweepLine sweep;
    Model model = Model::both;
};

// Throws invalid_parameter for unknown names, unknown keys or out-of-range values.
PresetExpansion expand_preset(const PresetRef& ref);

}  // namespace fibernet::netlist
