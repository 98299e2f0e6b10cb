#pragma once

#include <vector>

#include "fibernet/splitter.hpp"

namespace fibernet {

// Element scattering written out per element type, without going through a
// transfer matrix.
ScatteringMatrix element_scattering(const Element& e, double detuning);

// Interface k sits to the left of element k (k = 0..N).
struct InterfaceField {
    std::vector<Complex> rightward;
    std::vector<Complex> leftward;

    Complex e1_out() const { return rightward.back(); }
    Complex e2_out() const { return leftward.front(); }
};

// Dense solve of the 2(N+1) interface amplitudes. Throws singular_system.
InterfaceField boundary_solve_oracle(const NetworkSpec& spec, double detuning, Complex e1_in, Complex e2_in);

struct SplitInterfaceField {
    InterfaceField left;
    InterfaceField right;
    Complex eu_out{}, ed_out{};
};

SplitInterfaceField boundary_solve_oracle(const SplitNetwork& net, double detuning, const DriveVector& drive);

}  // namespace fibernet
