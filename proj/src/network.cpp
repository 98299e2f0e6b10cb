#include "fibernet/network.hpp"

#include <cmath>
#include <stdexcept>

#include "fibernet/error.hpp"

namespace fibernet {

void validate(const Element& e) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LossParams>)
                validate_efficiency(p.efficiency);
            else
                validate(p);
        },
        e);
}

void validate(const NetworkSpec& spec) {
    if (spec.elements.empty()) throw_invalid("network has no elements");
    for (const Element& e : spec.elements) validate(e);
}

std::vector<double> SweepSpec::detunings() const {
    validate(*this);
    std::vector<double> out(points);
    const double step = (detuning_max - detuning_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = detuning_min + step * static_cast<double>(i);
    out.back() = detuning_max;
    return out;
}

void validate(const SweepSpec& sweep) {
    if (sweep.points < 2) throw_invalid("sweep needs at least 2 points");
    if (!std::isfinite(sweep.detuning_min) || !std::isfinite(sweep.detuning_max) ||
        !(sweep.detuning_min < sweep.detuning_max))
        throw_invalid("sweep requires finite min < max");
}

double DriveVector::total_power() const {
    return std::norm(e1_in) + std::norm(e2_in) + std::norm(eu_in) + std::norm(ed_in);
}

const PortSpectrum& SpectraResult::port(std::string_view name) const {
    for (const PortSpectrum& p : ports)
        if (p.name == name) return p;
    throw std::out_of_range("no port named " + std::string(name));
}

bool SpectraResult::any_flagged() const {
    for (std::uint8_t f : flags)
        if (f != point_ok) return true;
    return false;
}

}  // namespace fibernet
