#pragma once

#include <string>
#include <vector>

#include "fibernet/netlist.hpp"
#include "fibernet/peaks.hpp"

namespace fibernet {

// Transfer-matrix spectrum of a chain or split network for an arbitrary drive.
SpectraResult tm_response(const netlist::Network& net, const DriveVector& drive, const std::vector<double>& detunings,
                          unsigned jobs = 1);

// Single-mode spectrum of the same network, restricted to the ports the
// transfer-matrix spectrum reports.
SpectraResult qo_response(const netlist::Network& net, const DriveVector& drive, const std::vector<double>& detunings,
                          unsigned jobs = 1);

struct PeakMatch {
    double tm_position;
    double qo_position;
    double tm_relative_prominence;  // prominence / port maximum
    double qo_relative_prominence;
};

struct PortComparison {
    std::string port;
    double max_abs_diff = 0.0;
    std::vector<Peak> tm_peaks, qo_peaks;
    std::vector<PeakMatch> matches;
    bool qualitative_mismatch = false;
    std::string reason;
};

// A port disagrees qualitatively when the peak counts differ or a matched
// peak is at least this many times more prominent in one model.
inline constexpr double kProminenceMismatch = 5.0;

std::vector<PortComparison> compare_spectra(const SpectraResult& tm, const SpectraResult& qo,
                                            double min_fraction = 0.01);

}  // namespace fibernet
