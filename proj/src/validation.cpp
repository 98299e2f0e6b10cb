#include "fibernet/validation.hpp"

#include <algorithm>
#include <cmath>

#include "fibernet/chain.hpp"
#include "fibernet/oracle.hpp"
#include "fibernet/qo_model.hpp"

namespace fibernet {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Element random_element(std::mt19937_64& rng, const ChainOptions& opt) {
    const int kinds = opt.lossless ? 2 : 4;
    switch (std::uniform_int_distribution<int>(0, kinds - 1)(rng)) {
        case 0: {
            const double r = uniform(rng, 0.0, 0.99);
            const double t = (1.0 - r) * (opt.lossless ? 1.0 : uniform(rng, 0.9, 1.0));
            return MirrorParams{r, t};
        }
        case 1:
            return SegmentParams{uniform(rng, 0.05, 5.0), opt.lossless ? 1.0 : uniform(rng, 0.7, 1.0),
                                 kSpeedOfLight / uniform(rng, 1.3, 1.6), mhz_to_angular(uniform(rng, -20.0, 20.0))};
        case 2: return LossParams{uniform(rng, 0.7, 1.0)};
        default: {
            AtomParams a;
            a.guided_decay = mhz_to_angular(uniform(rng, 0.0, 10.0));
            a.external_decay = mhz_to_angular(uniform(rng, 0.5, 10.0));
            a.detuning = mhz_to_angular(uniform(rng, -10.0, 10.0));
            if (opt.allow_chiral)
                a.chirality = static_cast<Chirality>(std::uniform_int_distribution<int>(0, 2)(rng));
            return a;
        }
    }
}

double det_error(const TransferMatrix& t) { return std::abs(t.det() - 1.0); }

SuiteResult determinant(std::mt19937_64& rng) {
    SuiteResult s{"determinant", true, 0.0, 1e-12, 0};
    for (int c = 0; c < 200; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, false, false});
        for (int k = 0; k < 20; ++k) {
            const double d = mhz_to_angular(uniform(rng, -100.0, 100.0));
            s.max_error = std::max(s.max_error, det_error(compose(chain, d)));
            ++s.checks;
        }
    }
    s.passed = s.max_error <= s.tolerance;
    return s;
}

SuiteResult unitarity(std::mt19937_64& rng) {
    SuiteResult s{"unitarity", true, 0.0, 1e-12, 0};
    for (int c = 0; c < 200; ++c) {
        const ScatteringMatrix m = mirror_scattering(MirrorParams::lossless(uniform(rng, 0.0, 1.0)));
        const Complex g11 = std::norm(m.s11) + std::norm(m.s21), g22 = std::norm(m.s12) + std::norm(m.s22);
        const Complex g12 = std::conj(m.s11) * m.s12 + std::conj(m.s21) * m.s22;
        s.max_error = std::max({s.max_error, std::abs(g11 - 1.0), std::abs(g22 - 1.0), std::abs(g12)});

        const Matrix4 b = splitter_scattering_4port({uniform(rng, 0.0, 1.0)});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Complex acc{};
                for (int k = 0; k < 4; ++k) acc += std::conj(b[k][i]) * b[k][j];
                s.max_error = std::max(s.max_error, std::abs(acc - (i == j ? 1.0 : 0.0)));
            }
        s.checks += 2;
    }
    s.passed = s.max_error <= s.tolerance;
    return s;
}

SuiteResult conservation(std::mt19937_64& rng) {
    SuiteResult s{"conservation", true, 0.0, 1e-10, 0};
    for (int c = 0; c < 100; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, true, false});
        SweepSpec sweep{mhz_to_angular(-50.0), mhz_to_angular(50.0), 101, DriveSide::left};
        const SpectraResult r = spectrum(chain, sweep);
        for (std::size_t i = 0; i < sweep.points; ++i)
            s.max_error = std::max(s.max_error, std::abs(r.ports[0].power[i] + r.ports[1].power[i] - 1.0));

        SplitNetwork net{random_chain(rng, {4, true, false}), random_chain(rng, {4, true, false}),
                         {uniform(rng, 0.0, 1.0)}};
        DriveVector drive{{uniform(rng, -1, 1), uniform(rng, -1, 1)}, {uniform(rng, -1, 1), 0.0},
                          {0.0, uniform(rng, -1, 1)}, {uniform(rng, -1, 1), uniform(rng, -1, 1)}};
        const SpectraResult q = splitter_spectrum(net, drive, sweep);
        for (std::size_t i = 0; i < sweep.points; ++i) {
            if (q.flags[i] != point_ok) continue;
            double total = 0.0;
            for (const PortSpectrum& p : q.ports) total += p.power[i];
            s.max_error = std::max(s.max_error, std::abs(total - 1.0));
        }
        s.checks += 2 * sweep.points;
    }
    s.passed = s.max_error <= s.tolerance;
    return s;
}

SuiteResult oracle_equivalence(std::mt19937_64& rng) {
    SuiteResult s{"oracle-equivalence", true, 0.0, 1e-10, 0};
    for (int c = 0; c < 100; ++c) {
        const NetworkSpec chain = random_chain(rng);
        const Complex e1{uniform(rng, -1, 1), uniform(rng, -1, 1)}, e2{uniform(rng, -1, 1), uniform(rng, -1, 1)};
        for (int k = 0; k < 100; ++k) {
            const double d = mhz_to_angular(uniform(rng, -100.0, 100.0));
            const ScatteringMatrix m = transfer_to_scattering(compose(chain, d));
            const InterfaceField f = boundary_solve_oracle(chain, d, e1, e2);
            s.max_error = std::max({s.max_error, std::abs(m.s11 * e1 + m.s12 * e2 - f.e1_out()),
                                    std::abs(m.s21 * e1 + m.s22 * e2 - f.e2_out())});
            ++s.checks;
        }
    }
    s.passed = s.max_error <= s.tolerance;
    return s;
}

SuiteResult parameter_mapping() {
    SuiteResult s{"parameter-mapping", true, 0.0, 0.002, 0};
    CoupledCavityTm tm;
    tm.group_velocity = calibrate_group_velocity(0.92, 112.25e6);
    tm.splitter_reflectance = 0.01;
    const QoParams p = map_tm_to_qo(tm);
    const std::pair<double, double> rows[] = {
        {p.kappa1, 1.787},           {p.kappa4, 0.893},           {p.kappa_bs, 0.046},
        {p.kappa_c1_internal, 0.544}, {p.kappa_c2_internal, 0.363}, {p.kappa_cf_internal, 0.278},
        {p.v1, 7.556},               {p.v2, 4.664}};
    for (const auto& [value, quoted] : rows) {
        s.max_error = std::max(s.max_error, std::abs(angular_to_mhz(value) - quoted));
        ++s.checks;
    }
    s.passed = s.max_error <= s.tolerance;
    return s;
}

}  // namespace

NetworkSpec random_chain(std::mt19937_64& rng, const ChainOptions& opt) {
    NetworkSpec spec;
    spec.name = "random";
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, opt.max_elements))(rng);
    for (std::size_t k = 0; k < n; ++k) spec.elements.push_back(random_element(rng, opt));
    return spec;
}

std::vector<SuiteResult> run_validation_suites(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SuiteResult> out;
    out.push_back(determinant(rng));
    out.push_back(unitarity(rng));
    out.push_back(conservation(rng));
    out.push_back(oracle_equivalence(rng));
    out.push_back(parameter_mapping());
    return out;
}

}  // namespace fibernet
