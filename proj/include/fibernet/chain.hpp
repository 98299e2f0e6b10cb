#pragma once

#include <utility>

#include "fibernet/kernels.hpp"
#include "fibernet/network.hpp"

namespace fibernet {

TransferMatrix element_transfer(const Element& e, double detuning);

TransferMatrix compose(const NetworkSpec& spec, double detuning);

// Product of all element matrices at every detuning, written into out.
// Throws singular_conversion when an element is opaque (mirror with T = 0).
void compose_batch(const NetworkSpec& spec, const std::vector<double>& detunings, kernels::MatrixBatch& out,
                   const kernels::KernelTable& table = kernels::active());

// Ports "T" and "R" relative to sweep.drive_side.
SpectraResult spectrum(const NetworkSpec& spec, const SweepSpec& sweep, unsigned jobs = 1);

// Ports "E1_out" and "E2_out" for an arbitrary two-sided drive (u/d ignored).
SpectraResult chain_response(const NetworkSpec& spec, const DriveVector& drive, const std::vector<double>& detunings,
                             unsigned jobs = 1);

struct PowerPair {
    double transmission;
    double reflection;
};

PowerPair high_finesse_reference(double kappa1, double kappa2, double kappa_c, double cavity_detuning);
PowerPair cqed_high_finesse_reference(double kappa1, double kappa2, double kappa_c, double g, double gamma,
                                      double cavity_detuning, double atom_detuning);

double effective_coupling(double g1, double g2);

}  // namespace fibernet
