#include "fibernet/qo_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fibernet/error.hpp"
#include "parallel.hpp"

namespace fibernet {

namespace {

constexpr Complex kI{0.0, 1.0};

using Mat5 = Eigen::Matrix<Complex, 5, 5>;
using Vec5 = Eigen::Matrix<Complex, 5, 1>;

bool coupled(const QoParams& p) { return p.layout == QoLayout::coupled_cavities; }

Mat5 to_eigen(const QoMatrix& m) {
    Mat5 out;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) out(r, c) = m[r][c];
    return out;
}

Complex port_input(Complex drive, double kappa) {
    if (drive == Complex{}) return {};
    if (!(kappa > 0.0)) throw_invalid("a driven port must have a positive decay rate");
    return kI * drive / std::sqrt(2.0 * kappa);
}

}  // namespace

double QoParams::kappa_c1() const { return kappa1 + kappa2 + kappa_c1_internal; }

void validate(const QoParams& p) {
    const double rates[] = {p.kappa1, p.kappa2, p.kappa4, p.kappa_c1_internal, p.kappa_c2_internal,
                            p.kappa_cf_internal, p.kappa_bs, p.v1, p.v2, p.g1, p.g2};
    for (double r : rates)
        if (!std::isfinite(r) || r < 0.0) throw_invalid("QO rates and couplings must be finite and >= 0");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) throw_invalid("QO gamma must be > 0");
    if (!(p.kappa_c1() > 0.0)) throw_invalid("cavity 1 total decay must be > 0");
    if (coupled(p)) {
        if (p.kappa2 != 0.0) throw_invalid("kappa2 belongs to the single-cavity layout");
        if (!(p.kappa_c2() > 0.0)) throw_invalid("cavity 2 total decay must be > 0");
        if (!(p.kappa_cf() > 0.0)) throw_invalid("fiber mode total decay must be > 0");
    }
    for (double d : {p.cavity1_detuning, p.cavity2_detuning, p.fiber_detuning, p.atom_detuning})
        if (!std::isfinite(d)) throw_invalid("QO detunings must be finite");
}

QoMatrix qo_coefficients(const QoParams& p, double probe) {
    QoMatrix m{};
    const Complex atom(-p.gamma, p.atom_detuning + probe);
    m[mode_sigma1][mode_sigma1] = atom;
    m[mode_sigma1][mode_a1] = -kI * p.g1;
    m[mode_a1][mode_a1] = Complex(-p.kappa_c1(), p.cavity1_detuning + probe);
    m[mode_a1][mode_sigma1] = -kI * p.g1;
    if (!coupled(p)) {
        for (std::size_t k : {mode_b, mode_a2, mode_sigma2}) m[k][k] = -1.0;
        return m;
    }
    m[mode_a1][mode_b] = -kI * p.v1;
    m[mode_b][mode_b] = Complex(-p.kappa_cf(), p.fiber_detuning + probe);
    m[mode_b][mode_a1] = -kI * p.v1;
    m[mode_b][mode_a2] = -kI * p.v2;
    m[mode_a2][mode_a2] = Complex(-p.kappa_c2(), p.cavity2_detuning + probe);
    m[mode_a2][mode_b] = -kI * p.v2;
    m[mode_a2][mode_sigma2] = -kI * p.g2;
    m[mode_sigma2][mode_sigma2] = atom;
    m[mode_sigma2][mode_a2] = -kI * p.g2;
    return m;
}

std::array<Complex, 5> qo_drive_terms(const QoParams& p) {
    std::array<Complex, 5> d{};
    d[mode_a1] = -kI * p.drive1;
    if (coupled(p)) {
        d[mode_b] = -kI * (p.drive_up + p.drive_down);
        d[mode_a2] = -kI * p.drive2;
    } else {
        d[mode_a1] += -kI * p.drive2;
    }
    return d;
}

namespace {

SteadyState solve(const QoParams& p, double probe) {
    const Mat5 m = to_eigen(qo_coefficients(p, probe));
    const std::array<Complex, 5> d = qo_drive_terms(p);
    Vec5 rhs;
    for (int k = 0; k < 5; ++k) rhs(k) = -d[k];
    const Vec5 x = m.partialPivLu().solve(rhs);
    return {x(0), x(1), x(2), x(3), x(4)};
}

}  // namespace

SteadyState steady_state(const QoParams& p, double probe_detuning) {
    validate(p);
    return solve(p, probe_detuning);
}

Complex qo_drive_from_input(Complex input, double kappa) {
    if (input == Complex{}) return {};
    if (!(kappa > 0.0)) throw_invalid("cannot drive a port whose decay rate is zero");
    return -kI * std::sqrt(2.0 * kappa) * input;
}

SpectraResult qo_spectrum(const QoParams& p, const std::vector<double>& detunings, unsigned jobs) {
    validate(p);
    const bool two = coupled(p);
    const double right_kappa = two ? p.kappa4 : p.kappa2;
    const Complex in1 = port_input(p.drive1, p.kappa1);
    const Complex in2 = port_input(p.drive2, right_kappa);
    const Complex in_u = two ? port_input(p.drive_up, p.kappa_bs) : Complex{};
    const Complex in_d = two ? port_input(p.drive_down, p.kappa_bs) : Complex{};
    if (!two && (p.drive_up != Complex{} || p.drive_down != Complex{}))
        throw_invalid("single-cavity layout has no splitter ports");
    const double power = std::norm(in1) + std::norm(in2) + std::norm(in_u) + std::norm(in_d);
    if (!(power > 0.0)) throw_invalid("QO spectrum needs at least one nonzero drive");
    const double norm = 1.0 / std::sqrt(power);

    const std::size_t n = detunings.size();
    SpectraResult res;
    res.detunings = detunings;
    res.flags.assign(n, point_ok);
    std::vector<const char*> names{"E1_out", "E2_out"};
    if (two) names.insert(names.end(), {"Eu_out", "Ed_out"});
    for (const char* name : names) res.ports.push_back({name, std::vector<Complex>(n), std::vector<double>(n)});

    const double c1 = std::sqrt(2.0 * p.kappa1), cr = std::sqrt(2.0 * right_kappa), cb = std::sqrt(2.0 * p.kappa_bs);
    detail::for_chunks(n, jobs, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const SteadyState s = solve(p, detunings[i]);
            Complex out[4];
            out[1] = in1 + c1 * s.a1;
            if (two) {
                out[0] = in2 + cr * s.a2;
                // the tap sends each input straight through: u_in -> d_out, d_in -> u_out
                out[2] = in_d + cb * s.b;
                out[3] = in_u + cb * s.b;
            } else {
                out[0] = in2 + cr * s.a1;
            }
            for (std::size_t k = 0; k < res.ports.size(); ++k) {
                res.ports[k].amplitude[i] = out[k] * norm;
                res.ports[k].power[i] = std::norm(out[k] * norm);
            }
        }
    });
    return res;
}

SpectraResult qo_spectrum(const QoParams& p, const SweepSpec& sweep, unsigned jobs) {
    return qo_spectrum(p, sweep.detunings(), jobs);
}

std::vector<NormalMode> normal_modes(const QoParams& p) {
    validate(p);
    const QoMatrix m = qo_coefficients(p, 0.0);
    const std::vector<std::size_t> active =
        coupled(p) ? std::vector<std::size_t>{0, 1, 2, 3, 4} : std::vector<std::size_t>{mode_sigma1, mode_a1};
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = m[active[r]][active[c]];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(sub, true);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "normal-mode analysis failed");

    std::vector<NormalMode> modes;
    for (Eigen::Index j = 0; j < k; ++j) {
        // M(probe) = M0 + i probe, so a resonance sits at probe = i lambda
        const Complex at = kI * solver.eigenvalues()(j);
        NormalMode mode{at.real(), -at.imag(), {}};
        const Eigen::VectorXcd v = solver.eigenvectors().col(j).normalized();
        for (Eigen::Index r = 0; r < k; ++r) mode.vector[active[r]] = v(r);
        modes.push_back(mode);
    }
    std::sort(modes.begin(), modes.end(), [](const NormalMode& a, const NormalMode& b) {
        return a.detuning < b.detuning;
    });
    return modes;
}

}  // namespace fibernet
