#include "fibernet/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fibernet/error.hpp"

namespace fibernet {

namespace {

constexpr Complex kI{0.0, 1.0};

using Dense = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Rows 2k and 2k+1 state the scattering relations of element k between
// interfaces k and k+1, with unknown columns r(k) and l(k) supplied by index maps.
template <class R, class L>
void stamp_chain(const NetworkSpec& spec, double detuning, Dense& a, Eigen::Index row0, R r, L l) {
    for (std::size_t k = 0; k < spec.elements.size(); ++k) {
        const ScatteringMatrix s = element_scattering(spec.elements[k], detuning);
        const Eigen::Index row = row0 + 2 * static_cast<Eigen::Index>(k);
        a(row, r(k + 1)) += 1.0;
        a(row, r(k)) -= s.s11;
        a(row, l(k + 1)) -= s.s12;
        a(row + 1, l(k)) += 1.0;
        a(row + 1, r(k)) -= s.s21;
        a(row + 1, l(k + 1)) -= s.s22;
    }
}

Vec solve(const Dense& a, const Vec& b) {
    Eigen::FullPivLU<Dense> lu(a);
    if (!lu.isInvertible()) throw Error(ErrorCode::singular_system, "interface system is singular");
    return lu.solve(b);
}

InterfaceField unpack(const Vec& x, Eigen::Index base, std::size_t interfaces) {
    InterfaceField f;
    for (std::size_t k = 0; k < interfaces; ++k) {
        f.rightward.push_back(x(base + 2 * static_cast<Eigen::Index>(k)));
        f.leftward.push_back(x(base + 2 * static_cast<Eigen::Index>(k) + 1));
    }
    return f;
}

}  // namespace

ScatteringMatrix element_scattering(const Element& e, double detuning) {
    struct Visitor {
        double delta;
        ScatteringMatrix operator()(const MirrorParams& p) const { return mirror_scattering(p); }
        ScatteringMatrix operator()(const SegmentParams& p) const {
            validate(p);
            const Complex pass = std::sqrt(p.efficiency) *
                                 std::polar(1.0, std::numbers::pi * (delta + p.resonance_offset) / p.fsr());
            return {pass, 0.0, 0.0, pass};
        }
        ScatteringMatrix operator()(const LossParams& p) const {
            validate_efficiency(p.efficiency);
            const double pass = std::sqrt(p.efficiency);
            return {pass, 0.0, 0.0, pass};
        }
        ScatteringMatrix operator()(const AtomParams& p) const {
            AtomParams shifted = p;
            shifted.detuning += delta;
            const Complex ix = kI * atom_polarizability(shifted);
            switch (p.chirality) {
                case Chirality::couples_right_only: {
                    const Complex t = 1.0 / (1.0 - ix);
                    return {t, ix * t, 0.0, 1.0};
                }
                case Chirality::couples_left_only: return {1.0, 0.0, ix, 1.0 + ix};
                case Chirality::symmetric: break;
            }
            const Complex t = 1.0 / (1.0 - ix);
            return {t, ix * t, ix * t, t};
        }
    };
    return std::visit(Visitor{detuning}, e);
}

InterfaceField boundary_solve_oracle(const NetworkSpec& spec, double detuning, Complex e1_in, Complex e2_in) {
    validate(spec);
    const std::size_t n = spec.elements.size();
    const auto size = static_cast<Eigen::Index>(2 * (n + 1));
    Dense a = Dense::Zero(size, size);
    Vec b = Vec::Zero(size);
    auto r = [](std::size_t k) { return static_cast<Eigen::Index>(2 * k); };
    auto l = [](std::size_t k) { return static_cast<Eigen::Index>(2 * k + 1); };
    stamp_chain(spec, detuning, a, 0, r, l);
    a(size - 2, r(0)) = 1.0;
    b(size - 2) = e1_in;
    a(size - 1, l(n)) = 1.0;
    b(size - 1) = e2_in;
    return unpack(solve(a, b), 0, n + 1);
}

SplitInterfaceField boundary_solve_oracle(const SplitNetwork& net, double detuning, const DriveVector& drive) {
    validate(net);
    const std::size_t n1 = net.left_chain.elements.size(), n2 = net.right_chain.elements.size();
    const auto base2 = static_cast<Eigen::Index>(2 * (n1 + 1));
    const Eigen::Index iu = base2 + static_cast<Eigen::Index>(2 * (n2 + 1)), id = iu + 1;
    const Eigen::Index size = id + 1;
    Dense a = Dense::Zero(size, size);
    Vec b = Vec::Zero(size);

    auto r1 = [](std::size_t k) { return static_cast<Eigen::Index>(2 * k); };
    auto l1 = [](std::size_t k) { return static_cast<Eigen::Index>(2 * k + 1); };
    auto r2 = [base2](std::size_t k) { return base2 + static_cast<Eigen::Index>(2 * k); };
    auto l2 = [base2](std::size_t k) { return base2 + static_cast<Eigen::Index>(2 * k + 1); };
    stamp_chain(net.left_chain, detuning, a, 0, r1, l1);
    stamp_chain(net.right_chain, detuning, a, static_cast<Eigen::Index>(2 * n1), r2, l2);

    Eigen::Index row = static_cast<Eigen::Index>(2 * (n1 + n2));
    a(row, r1(0)) = 1.0;
    b(row++) = drive.e1_in;
    a(row, l2(n2)) = 1.0;
    b(row++) = drive.e2_in;

    const Complex ir = kI * std::sqrt(net.splitter.reflectance);
    const double st = std::sqrt(net.splitter.transmittance());
    const Eigen::Index a1 = r1(n1), a2 = l1(n1), b1 = r2(0), b2 = l2(0);
    // a2 = i sqrt(R) d_in + sqrt(T) b2
    a(row, a2) = 1.0;
    a(row, b2) = -st;
    b(row++) = ir * drive.ed_in;
    // d_out = i sqrt(R) a1 + sqrt(T) u_in
    a(row, id) = 1.0;
    a(row, a1) = -ir;
    b(row++) = st * drive.eu_in;
    // b1 = sqrt(T) a1 + i sqrt(R) u_in
    a(row, b1) = 1.0;
    a(row, a1) = -st;
    b(row++) = ir * drive.eu_in;
    // u_out = sqrt(T) d_in + i sqrt(R) b2
    a(row, iu) = 1.0;
    a(row, b2) = -ir;
    b(row++) = st * drive.ed_in;

    const Vec x = solve(a, b);
    SplitInterfaceField f;
    f.left = unpack(x, 0, n1 + 1);
    f.right = unpack(x, base2, n2 + 1);
    f.eu_out = x(iu);
    f.ed_out = x(id);
    return f;
}

}  // namespace fibernet
