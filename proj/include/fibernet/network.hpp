#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fibernet/elements.hpp"

namespace fibernet {

using Element = std::variant<MirrorParams, SegmentParams, AtomParams, LossParams>;

void validate(const Element& e);

struct NetworkSpec {
    std::string name;
    std::vector<Element> elements;
};

void validate(const NetworkSpec& spec);

enum class DriveSide { left, right };

struct SweepSpec {
    double detuning_min = 0.0;  // rad/s
    double detuning_max = 0.0;  // rad/s
    std::size_t points = 2;
    DriveSide drive_side = DriveSide::left;

    std::vector<double> detunings() const;
};

void validate(const SweepSpec& sweep);

// Port naming: E1 travels left to right, E2 right to left, so E1_in enters on
// the left and E1_out leaves on the right. u/d are the splitter tap ports.
struct DriveVector {
    Complex e1_in{}, e2_in{}, eu_in{}, ed_in{};

    double total_power() const;
};

enum PointFlag : std::uint8_t { point_ok = 0, point_singular = 1, point_loop_singular = 2 };

struct PortSpectrum {
    std::string name;
    std::vector<Complex> amplitude;  // output amplitude / sqrt(total input power)
    std::vector<double> power;       // |output|^2 / total input power
};

struct SpectraResult {
    std::vector<double> detunings;
    std::vector<PortSpectrum> ports;
    std::vector<std::uint8_t> flags;

    const PortSpectrum& port(std::string_view name) const;
    bool any_flagged() const;
};

}  // namespace fibernet
