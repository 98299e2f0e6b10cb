#include "fibernet/chain.hpp"

#include <cmath>
#include <limits>

#include "fibernet/error.hpp"
#include "parallel.hpp"

namespace fibernet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

kernels::Uniform flatten(const TransferMatrix& m) {
    return {m.t11.real(), m.t11.imag(), m.t12.real(), m.t12.imag(),
            m.t21.real(), m.t21.imag(), m.t22.real(), m.t22.imag()};
}

int chirality_code(Chirality c) {
    switch (c) {
        case Chirality::couples_right_only: return 1;
        case Chirality::couples_left_only: return 2;
        case Chirality::symmetric: break;
    }
    return 0;
}

void check_drive(const DriveVector& drive) {
    if (!(drive.total_power() > 0.0) || !std::isfinite(drive.total_power()))
        throw_invalid("drive vector must carry nonzero finite power");
}

}  // namespace

TransferMatrix element_transfer(const Element& e, double detuning) {
    struct Visitor {
        double delta;
        TransferMatrix operator()(const MirrorParams& p) const { return mirror_transfer(p); }
        TransferMatrix operator()(const SegmentParams& p) const { return segment_transfer(p, delta); }
        TransferMatrix operator()(const LossParams& p) const { return loss_transfer(p.efficiency); }
        TransferMatrix operator()(const AtomParams& p) const {
            AtomParams shifted = p;
            shifted.detuning = p.detuning + delta;
            return atom_transfer(atom_polarizability(shifted), p.chirality);
        }
    };
    return std::visit(Visitor{detuning}, e);
}

TransferMatrix compose(const NetworkSpec& spec, double detuning) {
    validate(spec);
    TransferMatrix acc;
    for (const Element& e : spec.elements) acc = acc * element_transfer(e, detuning);
    return acc;
}

void compose_batch(const NetworkSpec& spec, const std::vector<double>& detunings, kernels::MatrixBatch& out,
                   const kernels::KernelTable& table) {
    validate(spec);
    const std::size_t n = detunings.size();
    out.resize(n);
    out.set_identity();
    kernels::BatchView acc = out.view();

    std::vector<double> diag;
    kernels::MatrixBatch scratch;
    for (const Element& e : spec.elements) {
        if (const auto* seg = std::get_if<SegmentParams>(&e)) {
            diag.resize(4 * n);
            const double k = std::numbers::pi / seg->fsr();
            const double amp = std::sqrt(seg->efficiency);
            for (std::size_t i = 0; i < n; ++i) {
                const Complex phase = std::polar(1.0, k * (detunings[i] + seg->resonance_offset));
                const Complex d1 = std::conj(phase) / amp, d2 = amp * phase;
                diag[i] = d1.real();
                diag[n + i] = d1.imag();
                diag[2 * n + i] = d2.real();
                diag[3 * n + i] = d2.imag();
            }
            table.multiply_diagonal(acc, {diag.data(), diag.data() + n, diag.data() + 2 * n, diag.data() + 3 * n, n});
        } else if (const auto* atom = std::get_if<AtomParams>(&e)) {
            validate(*atom);
            scratch.resize(n);
            kernels::AtomBatchParams p;
            p.ratio = atom->guided_decay / atom->external_decay;
            p.scale = 2.0 / atom->external_decay;
            p.offset = atom->detuning;
            p.chirality = chirality_code(atom->chirality);
            table.atom_matrices(detunings.data(), p, scratch.view());
            table.multiply(acc, std::as_const(scratch).view());
        } else {
            table.multiply_uniform(acc, flatten(element_transfer(e, 0.0)));
        }
    }
}

SpectraResult chain_response(const NetworkSpec& spec, const DriveVector& drive, const std::vector<double>& detunings,
                             unsigned jobs) {
    validate(spec);
    check_drive(drive);
    const std::size_t n = detunings.size();
    const double norm = 1.0 / std::sqrt(drive.total_power());

    SpectraResult res;
    res.detunings = detunings;
    res.flags.assign(n, point_ok);
    res.ports = {{"E1_out", std::vector<Complex>(n), std::vector<double>(n)},
                 {"E2_out", std::vector<Complex>(n), std::vector<double>(n)}};

    const kernels::KernelTable& table = kernels::active();
    detail::for_chunks(n, jobs, [&](std::size_t lo, std::size_t hi) {
        const std::vector<double> part(detunings.begin() + lo, detunings.begin() + hi);
        kernels::MatrixBatch t, s(part.size());
        try {
            compose_batch(spec, part, t, table);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::singular_conversion) throw;
            for (std::size_t i = lo; i < hi; ++i) {
                res.flags[i] = point_singular;
                for (PortSpectrum& p : res.ports) p.amplitude[i] = {kNaN, kNaN}, p.power[i] = kNaN;
            }
            return;
        }
        const kernels::ConstBatchView tv = std::as_const(t).view();
        kernels::BatchView sv = s.view();
        table.to_scattering(tv, sv, res.flags.data() + lo);
        for (std::size_t k = 0; k < part.size(); ++k) {
            const std::size_t i = lo + k;
            const Complex s11{sv.re[0][k], sv.im[0][k]}, s12{sv.re[1][k], sv.im[1][k]};
            const Complex s21{sv.re[2][k], sv.im[2][k]}, s22{sv.re[3][k], sv.im[3][k]};
            const Complex out1 = (s11 * drive.e1_in + s12 * drive.e2_in) * norm;
            const Complex out2 = (s21 * drive.e1_in + s22 * drive.e2_in) * norm;
            res.ports[0].amplitude[i] = out1;
            res.ports[0].power[i] = std::norm(out1);
            res.ports[1].amplitude[i] = out2;
            res.ports[1].power[i] = std::norm(out2);
        }
    });
    return res;
}

SpectraResult spectrum(const NetworkSpec& spec, const SweepSpec& sweep, unsigned jobs) {
    DriveVector drive;
    if (sweep.drive_side == DriveSide::left)
        drive.e1_in = 1.0;
    else
        drive.e2_in = 1.0;
    SpectraResult res = chain_response(spec, drive, sweep.detunings(), jobs);
    // left drive: E1_out transmits, E2_out reflects; right drive swaps them
    if (sweep.drive_side == DriveSide::left) {
        res.ports[0].name = "T";
        res.ports[1].name = "R";
    } else {
        std::swap(res.ports[0], res.ports[1]);
        res.ports[0].name = "T";
        res.ports[1].name = "R";
    }
    return res;
}

PowerPair high_finesse_reference(double kappa1, double kappa2, double kappa_c, double cavity_detuning) {
    if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0) || !(kappa_c > 0.0)) throw_invalid("high-finesse rates must be positive");
    const Complex den(kappa_c, -cavity_detuning);
    return {std::norm(2.0 * std::sqrt(kappa1 * kappa2) / den), std::norm(1.0 - 2.0 * kappa1 / den)};
}

PowerPair cqed_high_finesse_reference(double kappa1, double kappa2, double kappa_c, double g, double gamma,
                                      double cavity_detuning, double atom_detuning) {
    if (!(kappa1 >= 0.0) || !(kappa2 >= 0.0) || !(kappa_c > 0.0) || !(gamma > 0.0))
        throw_invalid("high-finesse rates must be positive");
    const Complex atom(gamma, -atom_detuning);
    const Complex den = Complex(kappa_c, -cavity_detuning) * atom + g * g;
    return {std::norm(2.0 * std::sqrt(kappa1 * kappa2) * atom / den), std::norm(1.0 - 2.0 * kappa1 * atom / den)};
}

double effective_coupling(double g1, double g2) {
    const double s = g1 * g1 + g2 * g2;
    if (!(s > 0.0)) throw_invalid("effective coupling needs g1 or g2 nonzero");
    return std::sqrt(g1 * g1 * g2 * g2 / s);
}

}  // namespace fibernet
