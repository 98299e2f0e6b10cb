#pragma once

#include <array>

#include "fibernet/chain.hpp"

namespace fibernet {

struct SplitterParams {
    double reflectance = 0.0;  // R_BS

    double transmittance() const { return 1.0 - reflectance; }
};

void validate(const SplitterParams& p);

// left_chain ends at the splitter (T^(S1)); right_chain starts there (T^(S2)).
struct SplitNetwork {
    NetworkSpec left_chain;
    NetworkSpec right_chain;
    SplitterParams splitter;
};

void validate(const SplitNetwork& net);

// Splits segment `segment_index` of a plain chain at `fraction` of its length
// and inserts the splitter there.
SplitNetwork insert_splitter(const NetworkSpec& chain, std::size_t segment_index, SplitterParams splitter,
                             double fraction = 0.5);

// Rows (a2, d_out, b1, u_out), columns (a1, d_in, b2, u_in); a1/a2 are the
// rightward/leftward fields on the left side of the splitter, b1/b2 on the right.
using Matrix4 = std::array<std::array<Complex, 4>, 4>;
Matrix4 splitter_scattering_4port(const SplitterParams& p);

struct SplitterOutputs {
    Complex e1_out{}, e2_out{}, eu_out{}, ed_out{};
    Complex loop_factor{};
};

// Throws loop_singular when |1 - T_BS s1_12 s2_21| < 1e-12.
SplitterOutputs solve_outputs(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                              const DriveVector& drive);
SplitterOutputs solve_outputs(const SplitNetwork& net, const DriveVector& drive, double detuning);

// Closed forms for the two single-port cases, written in transfer-matrix entries.
SplitterOutputs solve_drive_left(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                                 Complex e1_in);
SplitterOutputs solve_drive_up(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                               Complex eu_in);

// Ports "E1_out", "E2_out", "Eu_out", "Ed_out", each normalized by total input power.
SpectraResult splitter_spectrum(const SplitNetwork& net, const DriveVector& drive,
                                const std::vector<double>& detunings, unsigned jobs = 1);
SpectraResult splitter_spectrum(const SplitNetwork& net, const DriveVector& drive, const SweepSpec& sweep,
                                unsigned jobs = 1);

inline constexpr double kLoopTolerance = 1e-12;

}  // namespace fibernet
