#pragma once

#include <array>

#include "fibernet/units.hpp"

namespace fibernet {

struct TransferMatrix {
    Complex t11{1.0}, t12{}, t21{}, t22{1.0};

    static TransferMatrix identity() { return {}; }
    Complex det() const { return t11 * t22 - t12 * t21; }
};

struct ScatteringMatrix {
    Complex s11{1.0}, s12{}, s21{}, s22{1.0};

    Complex det() const { return s11 * s22 - s12 * s21; }
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

struct MirrorParams {
    double reflectance = 0.0;
    double transmittance = 1.0;

    static MirrorParams lossless(double r) { return {r, 1.0 - r}; }
};

struct SegmentParams {
    double length = 1.0;                         // m
    double efficiency = 1.0;                     // single-pass power transmission
    double group_velocity = kDefaultGroupVelocity;  // m/s
    double resonance_offset = 0.0;               // rad/s

    double fsr() const;  // rad/s, pi v_g / l
};

enum class Chirality { symmetric, couples_right_only, couples_left_only };

struct AtomParams {
    double guided_decay = 0.0;    // Gamma_1D, rad/s
    double external_decay = 1.0;  // Gamma', rad/s
    double detuning = 0.0;        // Delta_A; inside a chain, an offset added to the probe detuning
    Chirality chirality = Chirality::symmetric;
};

struct LossParams {
    double efficiency = 1.0;
};

void validate(const MirrorParams& p);
void validate(const SegmentParams& p);
void validate(const AtomParams& p);
void validate_efficiency(double eta);

ScatteringMatrix mirror_scattering(const MirrorParams& p);
TransferMatrix mirror_transfer(const MirrorParams& p);

// Opaque thresholds: |s11| or |t11| below this raises singular_conversion.
inline constexpr double kSingularTolerance = 1e-300;

TransferMatrix scattering_to_transfer(const ScatteringMatrix& s);
ScatteringMatrix transfer_to_scattering(const TransferMatrix& t);

TransferMatrix segment_transfer(const SegmentParams& p, double detuning);
TransferMatrix loss_transfer(double efficiency);

Complex atom_polarizability(const AtomParams& p);
TransferMatrix atom_transfer(Complex xi, Chirality chirality);

double free_spectral_range(double length, double group_velocity);  // rad/s
double gamma1d_from_g(double g, double length, double group_velocity);
double g_from_gamma1d(double gamma1d, double length, double group_velocity);
double g_from_waveguide_coupling(double g_w, double length);
double waveguide_coupling_from_g(double g, double length);
double gamma1d_from_waveguide_coupling(double g_w, double group_velocity);

}  // namespace fibernet
