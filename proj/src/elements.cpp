#include "fibernet/elements.hpp"

#include <cmath>
#include <sstream>

#include "fibernet/error.hpp"

namespace fibernet {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_parameter: return "invalid-parameter";
        case ErrorCode::singular_conversion: return "singular-conversion";
        case ErrorCode::singular_system: return "singular-system";
        case ErrorCode::loop_singular: return "loop-singular";
        case ErrorCode::unsupported_model: return "unsupported-model";
    }
    return "unknown";
}

void throw_invalid(const std::string& what) { throw Error(ErrorCode::invalid_parameter, what); }

namespace {

constexpr double kSumSlack = 1e-12;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
    return {a.t11 * b.t11 + a.t12 * b.t21, a.t11 * b.t12 + a.t12 * b.t22,
            a.t21 * b.t11 + a.t22 * b.t21, a.t21 * b.t12 + a.t22 * b.t22};
}

double SegmentParams::fsr() const { return free_spectral_range(length, group_velocity); }

void validate(const MirrorParams& p) {
    if (!finite(p.reflectance) || !finite(p.transmittance) || p.reflectance < 0.0 ||
        p.transmittance < 0.0 || p.reflectance + p.transmittance > 1.0 + kSumSlack) {
        std::ostringstream os;
        os << "mirror requires R >= 0, T >= 0, R + T <= 1 (got R=" << p.reflectance
           << ", T=" << p.transmittance << ")";
        throw_invalid(os.str());
    }
}

void validate_efficiency(double eta) {
    if (!finite(eta) || eta <= 0.0 || eta > 1.0) {
        std::ostringstream os;
        os << "efficiency eta must lie in (0, 1] (got " << eta << ")";
        throw_invalid(os.str());
    }
}

void validate(const SegmentParams& p) {
    if (!finite(p.length) || p.length <= 0.0) throw_invalid("segment length must be positive");
    if (!finite(p.group_velocity) || p.group_velocity <= 0.0)
        throw_invalid("segment group velocity must be positive");
    if (!finite(p.resonance_offset)) throw_invalid("segment resonance offset must be finite");
    validate_efficiency(p.efficiency);
}

void validate(const AtomParams& p) {
    if (!finite(p.guided_decay) || p.guided_decay < 0.0) throw_invalid("atom Gamma_1D must be >= 0");
    if (!finite(p.external_decay) || p.external_decay <= 0.0)
        throw_invalid("atom Gamma' must be > 0");
    if (!finite(p.detuning)) throw_invalid("atom detuning must be finite");
}

ScatteringMatrix mirror_scattering(const MirrorParams& p) {
    validate(p);
    const Complex t{0.0, std::sqrt(p.transmittance)};
    const Complex r{std::sqrt(p.reflectance), 0.0};
    return {t, r, r, t};
}

TransferMatrix mirror_transfer(const MirrorParams& p) { return scattering_to_transfer(mirror_scattering(p)); }

TransferMatrix scattering_to_transfer(const ScatteringMatrix& s) {
    if (std::abs(s.s11) < kSingularTolerance)
        throw Error(ErrorCode::singular_conversion, "s11 vanishes; element is opaque");
    const Complex inv = 1.0 / s.s11;
    return {inv, -s.s12 * inv, s.s21 * inv, s.det() * inv};
}

ScatteringMatrix transfer_to_scattering(const TransferMatrix& t) {
    if (std::abs(t.t11) < kSingularTolerance)
        throw Error(ErrorCode::singular_conversion, "t11 vanishes; chain is opaque");
    const Complex inv = 1.0 / t.t11;
    return {inv, -t.t12 * inv, t.t21 * inv, t.det() * inv};
}

TransferMatrix segment_transfer(const SegmentParams& p, double detuning) {
    validate(p);
    const double theta = std::numbers::pi * (detuning + p.resonance_offset) / p.fsr();
    const double amp = std::sqrt(p.efficiency);
    const Complex phase = std::polar(1.0, theta);
    return {std::conj(phase) / amp, {}, {}, amp * phase};
}

TransferMatrix loss_transfer(double efficiency) {
    validate_efficiency(efficiency);
    const double amp = std::sqrt(efficiency);
    return {1.0 / amp, {}, {}, amp};
}

Complex atom_polarizability(const AtomParams& p) {
    validate(p);
    const double ratio = p.guided_decay / p.external_decay;
    return -ratio / Complex(2.0 * p.detuning / p.external_decay, 1.0);
}

TransferMatrix atom_transfer(Complex xi, Chirality chirality) {
    const Complex ix = Complex(0.0, 1.0) * xi;
    switch (chirality) {
        case Chirality::couples_left_only: return {1.0, 0.0, ix, 1.0 + ix};
        case Chirality::couples_right_only: return {1.0 - ix, -ix, 0.0, 1.0};
        case Chirality::symmetric: break;
    }
    return {1.0 - ix, -ix, ix, 1.0 + ix};
}

double free_spectral_range(double length, double group_velocity) {
    if (!(length > 0.0) || !(group_velocity > 0.0)) throw_invalid("FSR needs positive length and v_g");
    return std::numbers::pi * group_velocity / length;
}

double gamma1d_from_g(double g, double length, double group_velocity) {
    if (!(length > 0.0) || !(group_velocity > 0.0)) throw_invalid("Gamma_1D needs positive length and v_g");
    return length / group_velocity * g * g;
}

double g_from_gamma1d(double gamma1d, double length, double group_velocity) {
    if (!(length > 0.0) || !(group_velocity > 0.0)) throw_invalid("g needs positive length and v_g");
    if (gamma1d < 0.0) throw_invalid("Gamma_1D must be >= 0");
    return std::sqrt(gamma1d * group_velocity / length);
}

double g_from_waveguide_coupling(double g_w, double length) {
    if (!(length > 0.0)) throw_invalid("length must be positive");
    return g_w * std::sqrt(4.0 * std::numbers::pi / length);
}

double waveguide_coupling_from_g(double g, double length) {
    if (!(length > 0.0)) throw_invalid("length must be positive");
    return g * std::sqrt(length / (4.0 * std::numbers::pi));
}

double gamma1d_from_waveguide_coupling(double g_w, double group_velocity) {
    if (!(group_velocity > 0.0)) throw_invalid("v_g must be positive");
    return 4.0 * std::numbers::pi * g_w * g_w / group_velocity;
}

}  // namespace fibernet
