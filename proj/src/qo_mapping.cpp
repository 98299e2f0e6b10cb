#include <cmath>
#include <optional>

#include "fibernet/error.hpp"
#include "fibernet/qo_model.hpp"

namespace fibernet {

namespace {

[[noreturn]] void unsupported(const std::string& what) { throw Error(ErrorCode::unsupported_model, what); }

double half_fsr_hz(double length, double group_velocity) { return group_velocity / (4.0 * length); }

// Everything between two consecutive mirrors (or outside the outermost ones).
struct Region {
    double flight_time = 0.0;      // sum of l / v_g
    double efficiency = 1.0;       // single-pass power transmission
    double weighted_offset = 0.0;  // sum of delta * l / v_g
    double g_squared_flight = 0.0; // sum of Gamma_1D over atoms
    std::optional<double> gamma_prime, atom_offset;
    bool has_splitter = false;
    bool has_atoms = false;

    double fsr_hz() const { return 0.5 / flight_time; }
    double offset() const { return weighted_offset / flight_time; }
};

struct Layout {
    std::vector<MirrorParams> mirrors;
    std::vector<Region> regions;  // mirrors.size() + 1 entries
};

Layout scan(const std::vector<Element>& elements, std::optional<std::size_t> splitter_at) {
    Layout out;
    out.regions.emplace_back();
    for (std::size_t k = 0; k <= elements.size(); ++k) {
        if (splitter_at && *splitter_at == k) out.regions.back().has_splitter = true;
        if (k == elements.size()) break;
        const Element& e = elements[k];
        Region& reg = out.regions.back();
        if (const auto* m = std::get_if<MirrorParams>(&e)) {
            out.mirrors.push_back(*m);
            out.regions.emplace_back();
        } else if (const auto* s = std::get_if<SegmentParams>(&e)) {
            const double tau = s->length / s->group_velocity;
            reg.flight_time += tau;
            reg.efficiency *= s->efficiency;
            reg.weighted_offset += s->resonance_offset * tau;
        } else if (const auto* l = std::get_if<LossParams>(&e)) {
            reg.efficiency *= l->efficiency;
        } else if (const auto* a = std::get_if<AtomParams>(&e)) {
            if (a->chirality != Chirality::symmetric) unsupported("QO model has no chiral atoms");
            if (reg.gamma_prime && (*reg.gamma_prime != a->external_decay || *reg.atom_offset != a->detuning))
                unsupported("atoms sharing a cavity must share Gamma' and detuning in the QO model");
            reg.gamma_prime = a->external_decay;
            reg.atom_offset = a->detuning;
            reg.g_squared_flight += a->guided_decay;
            reg.has_atoms = true;
        }
    }
    for (std::size_t r : {std::size_t{0}, out.regions.size() - 1}) {
        const Region& reg = out.regions[r];
        if (reg.has_atoms || reg.efficiency != 1.0 || reg.has_splitter)
            unsupported("QO model needs atoms, losses and the splitter inside the mirrors");
    }
    for (std::size_t r = 1; r + 1 < out.regions.size(); ++r)
        if (!(out.regions[r].flight_time > 0.0)) unsupported("adjacent mirrors leave a cavity with no length");
    return out;
}

double g_of(const Region& r) { return std::sqrt(r.g_squared_flight / r.flight_time); }

double mirror_loss(const MirrorParams& m) { return std::max(0.0, 1.0 - m.reflectance - m.transmittance); }

void attach_atoms(QoParams& p, const Region* c1, const Region* c2) {
    std::optional<double> gp, off;
    for (const Region* r : {c1, c2}) {
        if (!r || !r->has_atoms) continue;
        if (gp && (*gp != *r->gamma_prime || *off != *r->atom_offset))
            unsupported("QO model uses one Gamma' and one atom detuning for both cavities");
        gp = r->gamma_prime;
        off = r->atom_offset;
    }
    // no atoms: the atomic rows decouple and any positive gamma will do
    p.gamma = gp ? 0.5 * *gp : 1.0;
    p.atom_detuning = off.value_or(0.0);
}

QoParams from_layout(const Layout& lay, double splitter_reflectance, const DriveVector& drive) {
    QoParams p;
    const auto& m = lay.mirrors;
    if (m.size() == 2) {
        const Region& c = lay.regions[1];
        const double f = c.fsr_hz();
        p.layout = QoLayout::single_cavity;
        p.kappa1 = 0.5 * f * m[0].transmittance;
        p.kappa2 = 0.5 * f * m[1].transmittance;
        p.kappa_c1_internal = -f * std::log(c.efficiency) + 0.5 * f * (mirror_loss(m[0]) + mirror_loss(m[1]));
        p.cavity1_detuning = c.offset();
        p.g1 = g_of(c);
        attach_atoms(p, &c, nullptr);
        if (drive.eu_in != Complex{} || drive.ed_in != Complex{}) throw_invalid("no splitter to drive");
        p.drive1 = qo_drive_from_input(drive.e1_in, p.kappa1);
        p.drive2 = qo_drive_from_input(drive.e2_in, p.kappa2);
        return p;
    }
    if (m.size() != 4) unsupported("QO model covers one cavity (2 mirrors) or two coupled cavities (4 mirrors)");
    const Region &c1 = lay.regions[1], &fib = lay.regions[2], &c2 = lay.regions[3];
    if (c1.has_splitter || c2.has_splitter) unsupported("QO model needs the splitter in the connecting fiber");
    if (fib.has_atoms) unsupported("QO model has no atoms in the connecting fiber");
    const double f1 = c1.fsr_hz(), ff = fib.fsr_hz(), f2 = c2.fsr_hz();

    p.layout = QoLayout::coupled_cavities;
    p.kappa1 = 0.5 * f1 * m[0].transmittance;
    p.kappa4 = 0.5 * f2 * m[3].transmittance;
    p.kappa_c1_internal = -f1 * std::log(c1.efficiency) + 0.5 * f1 * (mirror_loss(m[0]) + mirror_loss(m[1]));
    p.kappa_c2_internal = -f2 * std::log(c2.efficiency) + 0.5 * f2 * (mirror_loss(m[2]) + mirror_loss(m[3]));
    p.kappa_cf_internal = -ff * std::log(fib.efficiency) + 0.5 * ff * (mirror_loss(m[1]) + mirror_loss(m[2]));
    p.kappa_bs = 0.5 * ff * splitter_reflectance;
    // v_j^2 = kappa_{j+1} omega_FSRf / pi = 2 kappa_{j+1} FSRf
    p.v1 = std::sqrt(2.0 * (0.5 * f1 * m[1].transmittance) * ff);
    p.v2 = std::sqrt(2.0 * (0.5 * f2 * m[2].transmittance) * ff);
    p.cavity1_detuning = c1.offset();
    p.cavity2_detuning = c2.offset();
    p.fiber_detuning = fib.offset();
    p.g1 = g_of(c1);
    p.g2 = g_of(c2);
    attach_atoms(p, &c1, &c2);
    p.drive1 = qo_drive_from_input(drive.e1_in, p.kappa1);
    p.drive2 = qo_drive_from_input(drive.e2_in, p.kappa4);
    p.drive_up = qo_drive_from_input(drive.eu_in, p.kappa_bs);
    p.drive_down = qo_drive_from_input(drive.ed_in, p.kappa_bs);
    return p;
}

}  // namespace

QoParams map_tm_to_qo(const SingleCavityTm& tm) {
    validate(MirrorParams::lossless(tm.r1));
    validate(MirrorParams::lossless(tm.r2));
    validate_efficiency(tm.efficiency);
    const double half = half_fsr_hz(tm.length, tm.group_velocity);
    QoParams p;
    p.layout = QoLayout::single_cavity;
    p.kappa1 = half * (1.0 - tm.r1);
    p.kappa2 = half * (1.0 - tm.r2);
    p.kappa_c1_internal = -2.0 * half * std::log(tm.efficiency);
    p.g1 = tm.g;
    p.gamma = tm.gamma;
    return p;
}

QoParams map_tm_to_qo(const CoupledCavityTm& tm) {
    for (double r : tm.reflectance) validate(MirrorParams::lossless(r));
    for (double e : {tm.efficiency1, tm.efficiency2, tm.fiber_efficiency}) validate_efficiency(e);
    const double h1 = half_fsr_hz(tm.length1, tm.group_velocity);
    const double h2 = half_fsr_hz(tm.length2, tm.group_velocity);
    const double hf = half_fsr_hz(tm.fiber_length, tm.group_velocity);
    const double omega_fsr_f = free_spectral_range(tm.fiber_length, tm.group_velocity);
    QoParams p;
    p.layout = QoLayout::coupled_cavities;
    p.kappa1 = h1 * (1.0 - tm.reflectance[0]);
    p.kappa4 = h2 * (1.0 - tm.reflectance[3]);
    p.kappa_c1_internal = -2.0 * h1 * std::log(tm.efficiency1);
    p.kappa_c2_internal = -2.0 * h2 * std::log(tm.efficiency2);
    p.kappa_cf_internal = -2.0 * hf * std::log(tm.fiber_efficiency);
    p.kappa_bs = hf * tm.splitter_reflectance;
    p.v1 = std::sqrt(h1 * (1.0 - tm.reflectance[1]) * omega_fsr_f / std::numbers::pi);
    p.v2 = std::sqrt(h2 * (1.0 - tm.reflectance[2]) * omega_fsr_f / std::numbers::pi);
    p.g1 = tm.g1;
    p.g2 = tm.g2;
    p.gamma = tm.gamma;
    return p;
}

QoParams qo_params_from_network(const NetworkSpec& chain, const DriveVector& drive) {
    validate(chain);
    if (drive.eu_in != Complex{} || drive.ed_in != Complex{}) throw_invalid("chain has no splitter ports");
    return from_layout(scan(chain.elements, std::nullopt), 0.0, drive);
}

QoParams qo_params_from_network(const SplitNetwork& net, const DriveVector& drive) {
    validate(net);
    std::vector<Element> all = net.left_chain.elements;
    all.insert(all.end(), net.right_chain.elements.begin(), net.right_chain.elements.end());
    return from_layout(scan(all, net.left_chain.elements.size()), net.splitter.reflectance, drive);
}

}  // namespace fibernet
