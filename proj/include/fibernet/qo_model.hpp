#pragma once

#include <array>
#include <vector>

#include "fibernet/splitter.hpp"

namespace fibernet {

// single_cavity: modes sigma1, a1 only, with mirrors kappa1 (left) and kappa2 (right).
// coupled_cavities: sigma1, a1, b, a2, sigma2 with outer mirrors kappa1, kappa4.
enum class QoLayout { single_cavity, coupled_cavities };

// Rates are s^-1 (quoted values are rate / 2pi); detunings and couplings rad/s.
// Detunings are the values at zero probe detuning.
struct QoParams {
    QoLayout layout = QoLayout::coupled_cavities;

    double cavity1_detuning = 0.0, cavity2_detuning = 0.0, fiber_detuning = 0.0, atom_detuning = 0.0;
    double kappa1 = 0.0, kappa2 = 0.0, kappa4 = 0.0;
    double kappa_c1_internal = 0.0, kappa_c2_internal = 0.0, kappa_cf_internal = 0.0, kappa_bs = 0.0;
    double v1 = 0.0, v2 = 0.0;
    double g1 = 0.0, g2 = 0.0;
    double gamma = 0.0;
    Complex drive1{}, drive2{}, drive_up{}, drive_down{};

    double kappa_c1() const;
    double kappa_c2() const { return kappa4 + kappa_c2_internal; }
    double kappa_cf() const { return kappa_cf_internal + kappa_bs; }
};

void validate(const QoParams& p);

enum QoMode : std::size_t { mode_sigma1 = 0, mode_a1 = 1, mode_b = 2, mode_a2 = 3, mode_sigma2 = 4 };

struct SteadyState {
    Complex sigma1{}, a1{}, b{}, a2{}, sigma2{};
};

using QoMatrix = std::array<std::array<Complex, 5>, 5>;

// Coefficient matrix M and drive vector d of M x + d = 0 at the given probe detuning.
QoMatrix qo_coefficients(const QoParams& p, double probe_detuning);
std::array<Complex, 5> qo_drive_terms(const QoParams& p);

SteadyState steady_state(const QoParams& p, double probe_detuning = 0.0);

// Converts a travelling-wave input amplitude on a port with decay rate kappa
// into the drive strength of the corresponding mode (a_in = i E / sqrt(2 kappa)).
Complex qo_drive_from_input(Complex input, double kappa);

// Ports named like the transfer-matrix spectra: E1_out (right), E2_out (left),
// plus Eu_out and Ed_out for the coupled layout. Normalized by total input power.
SpectraResult qo_spectrum(const QoParams& p, const std::vector<double>& detunings, unsigned jobs = 1);
SpectraResult qo_spectrum(const QoParams& p, const SweepSpec& sweep, unsigned jobs = 1);

struct NormalMode {
    double detuning;   // rad/s, probe detuning of the resonance
    double linewidth;  // s^-1, amplitude decay rate
    std::array<Complex, 5> vector;  // normalized eigenvector in (sigma1, a1, b, a2, sigma2)
};

// Sorted by detuning. The single-cavity layout returns two modes.
std::vector<NormalMode> normal_modes(const QoParams& p);

struct SingleCavityTm {
    double r1 = 0.9, r2 = 0.9;
    double length = 1.0;
    double efficiency = 1.0;
    double group_velocity = kDefaultGroupVelocity;
    double g = 0.0;
    double gamma = 1.0;
};

struct CoupledCavityTm {
    std::array<double, 4> reflectance{0.8, 0.65, 0.8, 0.85};
    double length1 = 0.92, length2 = 1.38, fiber_length = 1.8;
    double efficiency1 = 0.97, efficiency2 = 0.97, fiber_efficiency = 0.97;
    double group_velocity = kDefaultGroupVelocity;
    double splitter_reflectance = 0.0;
    double g1 = 0.0, g2 = 0.0;
    double gamma = 1.0;
};

QoParams map_tm_to_qo(const SingleCavityTm& tm);
QoParams map_tm_to_qo(const CoupledCavityTm& tm);

// Reads cavities off a chain by locating its mirrors: two mirrors give the
// single-cavity layout, four give coupled cavities. Drives are attached from
// `drive` using the outer-mirror and splitter rates.
QoParams qo_params_from_network(const NetworkSpec& chain, const DriveVector& drive);
QoParams qo_params_from_network(const SplitNetwork& net, const DriveVector& drive);

}  // namespace fibernet
