#pragma once

#include <complex>
#include <numbers>

namespace fibernet {

using Complex = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Effective group index of the fiber, calibrated from tabulated (length, FSR)
// pairs: 0.92 m <-> 112.25 MHz gives c / (2 * 0.92 m * 112.25 MHz) = 1.45150.
inline constexpr double kDefaultGroupIndex = 1.4515;
inline constexpr double kDefaultGroupVelocity = kSpeedOfLight / kDefaultGroupIndex;

// Frequencies cross the API boundary as ordinary-frequency MHz (omega / 2pi);
// everything inside the library is angular (rad/s).
constexpr double mhz_to_angular(double mhz) { return kTwoPi * 1e6 * mhz; }
constexpr double angular_to_mhz(double omega) { return omega / (kTwoPi * 1e6); }

// Group velocity that reproduces a measured free spectral range (Hz) for a
// segment of the given length.
constexpr double calibrate_group_velocity(double length, double fsr_hz) { return 2.0 * length * fsr_hz; }

}  // namespace fibernet
