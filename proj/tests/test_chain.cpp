#include <doctest.h>

#include "fibernet/chain.hpp"
#include "fibernet/oracle.hpp"
#include "fibernet/peaks.hpp"
#include "fibernet/validation.hpp"
#include "support.hpp"

using namespace fibernet;
using namespace fibernet::test;

namespace {

NetworkSpec fabry_perot(double r1, double r2, double l, double eta) {
    return {"fp", {MirrorParams::lossless(r1), SegmentParams{l, eta, kDefaultGroupVelocity, 0.0},
                   MirrorParams::lossless(r2)}};
}

// Airy formulas for a lossless-mirror cavity with single-pass power efficiency eta
PowerPair airy(double r1, double r2, double eta, double phase) {
    const Complex e = std::polar(eta, phase);
    const Complex den = 1.0 - std::sqrt(r1 * r2) * e;
    const double t = eta * (1 - r1) * (1 - r2) / std::norm(den);
    const double r = std::norm(std::sqrt(r1) - std::sqrt(r2) * e) / std::norm(den);
    return {t, r};
}

SweepSpec sweep_mhz(double lo, double hi, std::size_t n, DriveSide side = DriveSide::left) {
    return {mhz_to_angular(lo), mhz_to_angular(hi), n, side};
}

}  // namespace

TEST_CASE("Fabry-Perot transmission on resonance") {
    const NetworkSpec fp = fabry_perot(0.8, 0.85, 2.0, 0.98);
    const SpectraResult r = spectrum(fp, sweep_mhz(-1, 1, 3));
    CHECK(r.port("T").power[1] == doctest::Approx(0.7986).epsilon(1e-4));
    const double expect = 0.98 * 0.2 * 0.15 / std::pow(1 - 0.98 * std::sqrt(0.8 * 0.85), 2);
    CHECK(r.port("T").power[1] == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("Fabry-Perot spectrum follows the Airy formulas") {
    const NetworkSpec fp = fabry_perot(0.9, 0.65, 2.0, 0.98);
    const SweepSpec sw = sweep_mhz(-80, 80, 161);
    const SpectraResult r = spectrum(fp, sw);
    const double fsr = free_spectral_range(2.0, kDefaultGroupVelocity);
    const std::vector<double> d = sw.detunings();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const PowerPair a = airy(0.9, 0.65, 0.98, 2.0 * M_PI * d[i] / fsr);
        CHECK(r.port("T").power[i] == doctest::Approx(a.transmission).epsilon(1e-12));
        CHECK(r.port("R").power[i] == doctest::Approx(a.reflection).epsilon(1e-12));
    }
    // periodic in the FSR
    CHECK(mdiff(compose(fp, fsr * 2.0), compose(fp, 0.0)) < 1e-9);
}

TEST_CASE("trivial chains") {
    const NetworkSpec open{"open", {MirrorParams::lossless(0.0), SegmentParams{1.0, 1.0}, MirrorParams::lossless(0.0)}};
    const SpectraResult r = spectrum(open, sweep_mhz(-50, 50, 11));
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(r.port("T").power[i] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.port("R").power[i] < 1e-30);
    }
    const NetworkSpec one{"m", {MirrorParams{0.6, 0.3}}};
    CHECK(mdiff(compose(one, 1e7), mirror_transfer({0.6, 0.3})) == 0.0);
    CHECK_THROWS(compose(NetworkSpec{"empty", {}}, 1e7));
}

TEST_CASE("empty cavity element formulas") {
    // t11 of M1-seg-M2 from the mirror and propagation matrices written out by hand
    std::mt19937_64 rng(17);
    const double r1 = 0.8, r2 = 0.7, l = 1.3, eta = 0.95;
    const NetworkSpec fp = fabry_perot(r1, r2, l, eta);
    for (int n = 0; n < 5; ++n) {
        const double d = mhz_to_angular(uniform(rng, -100, 100));
        const TransferMatrix m1 = mirror_transfer(MirrorParams::lossless(r1));
        const TransferMatrix m2 = mirror_transfer(MirrorParams::lossless(r2));
        const double th = M_PI * d / free_spectral_range(l, kDefaultGroupVelocity);
        const Complex p = std::exp(Complex(0, -th)) / std::sqrt(eta), q = std::exp(Complex(0, th)) * std::sqrt(eta);
        const TransferMatrix expect{m1.t11 * p * m2.t11 + m1.t12 * q * m2.t21, m1.t11 * p * m2.t12 + m1.t12 * q * m2.t22,
                                    m1.t21 * p * m2.t11 + m1.t22 * q * m2.t21, m1.t21 * p * m2.t12 + m1.t22 * q * m2.t22};
        CHECK(mdiff(compose(fp, d), expect) < 1e-12);
    }
}

TEST_CASE("lossless chains conserve power and are reciprocal") {
    std::mt19937_64 rng(31);
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(mhz_to_angular(uniform(rng, -100, 100)));
    for (int c = 0; c < 100; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, true, false});
        for (double d : grid) {
            const TransferMatrix t = compose(chain, d);
            const double tl = std::norm(1.0 / t.t11), rl = std::norm(t.t21 / t.t11);
            const double tr = std::norm(t.det() / t.t11), rr = std::norm(t.t12 / t.t11);
            CHECK(std::abs(tl + rl - 1.0) < 1e-12);
            CHECK(std::abs(tr + rr - 1.0) < 1e-12);
            CHECK(std::abs(tl - tr) < 1e-12);
        }
    }
}

TEST_CASE("lossy chains with symmetric atoms keep transmission reciprocal") {
    std::mt19937_64 rng(37);
    for (int c = 0; c < 100; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, false, false});
        const SweepSpec sw = sweep_mhz(-40, 40, 21);
        SweepSpec right = sw;
        right.drive_side = DriveSide::right;
        const SpectraResult a = spectrum(chain, sw), b = spectrum(chain, right);
        for (std::size_t i = 0; i < 21; ++i) {
            CHECK(a.port("T").power[i] == doctest::Approx(b.port("T").power[i]).epsilon(1e-10));
            CHECK(a.port("T").power[i] + a.port("R").power[i] <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("chain_response is linear and matches spectrum") {
    const NetworkSpec fp = fabry_perot(0.9, 0.65, 2.0, 0.98);
    const SweepSpec sw = sweep_mhz(-10, 10, 51);
    const SpectraResult s = spectrum(fp, sw);
    const SpectraResult left = chain_response(fp, {Complex(0.3, 0.4), 0.0, 0.0, 0.0}, sw.detunings());
    for (std::size_t i = 0; i < 51; ++i) {
        CHECK(left.port("E1_out").power[i] == doctest::Approx(s.port("T").power[i]).epsilon(1e-13));
        CHECK(left.port("E2_out").power[i] == doctest::Approx(s.port("R").power[i]).epsilon(1e-13));
    }
    const std::vector<double> d = sw.detunings();
    const DriveVector a{1.0, 0.0, 0.0, 0.0}, b{0.0, Complex(0, 1), 0.0, 0.0}, ab{1.0, Complex(0, 1), 0.0, 0.0};
    const SpectraResult ra = chain_response(fp, a, d), rb = chain_response(fp, b, d), rab = chain_response(fp, ab, d);
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (const char* port : {"E1_out", "E2_out"}) {
            const Complex sum = ra.port(port).amplitude[i] + rb.port(port).amplitude[i];
            CHECK(cdiff(sum / std::sqrt(2.0), rab.port(port).amplitude[i]) < 1e-13);
        }
    }
}

TEST_CASE("sweeps are deterministic under parallel evaluation") {
    std::mt19937_64 rng(41);
    const NetworkSpec chain = random_chain(rng, {6, false, true});
    const SweepSpec sw = sweep_mhz(-100, 100, 5001);
    const SpectraResult one = spectrum(chain, sw, 1), many = spectrum(chain, sw, 7);
    CHECK(one.port("T").power == many.port("T").power);
    CHECK(one.port("R").power == many.port("R").power);
}

TEST_CASE("opaque mirror flags points instead of failing") {
    const NetworkSpec wall{"wall", {MirrorParams{1.0, 0.0}, SegmentParams{1.0, 1.0}}};
    const SpectraResult r = spectrum(wall, sweep_mhz(-1, 1, 3));
    CHECK(r.any_flagged());
    CHECK(r.flags[1] == point_singular);
}

TEST_CASE("oracle agrees with composition") {
    // single mirror
    const MirrorParams m{0.6, 0.35};
    const ScatteringMatrix s = mirror_scattering(m);
    const Complex e1{0.3, -0.2}, e2{0.5, 0.1};
    const InterfaceField f = boundary_solve_oracle({"m", {m}}, 0.0, e1, e2);
    // outputs (E1_out, E2_out) = S (E1_in, E2_in); s11 is the forward transmission
    CHECK(cdiff(f.e1_out(), s.s11 * e1 + s.s12 * e2) < 1e-14);
    CHECK(cdiff(f.e2_out(), s.s21 * e1 + s.s22 * e2) < 1e-14);

    // build-up inside an impedance-matched cavity
    const NetworkSpec fp = fabry_perot(0.9, 0.9, 2.0, 1.0);
    const InterfaceField g = boundary_solve_oracle(fp, 0.0, 1.0, 0.0);
    CHECK(std::abs(g.rightward[1]) > 1.0);
    CHECK(std::abs(g.e1_out()) == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(43);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, false, true});
        for (int k = 0; k < 100; ++k) {
            const double d = mhz_to_angular(uniform(rng, -100, 100));
            const Complex a{uniform(rng, -1, 1), uniform(rng, -1, 1)}, b{uniform(rng, -1, 1), uniform(rng, -1, 1)};
            const ScatteringMatrix sc = transfer_to_scattering(compose(chain, d));
            const InterfaceField o = boundary_solve_oracle(chain, d, a, b);
            worst = std::max({worst, cdiff(o.e1_out(), sc.s11 * a + sc.s12 * b),
                              cdiff(o.e2_out(), sc.s21 * a + sc.s22 * b)});
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("coupled empty cavities show a central transmission peak") {
    const double v = kDefaultGroupVelocity;
    const NetworkSpec chain{"cc",
                            {MirrorParams::lossless(0.8), SegmentParams{0.92, 0.97, v, 0.0}, MirrorParams::lossless(0.65),
                             SegmentParams{1.8, 0.97, v, 0.0}, MirrorParams::lossless(0.8),
                             SegmentParams{1.38, 0.97, v, 0.0}, MirrorParams::lossless(0.85)}};
    const SweepSpec sw = sweep_mhz(-20, 20, 2001);
    const SpectraResult r = spectrum(chain, sw);
    const std::vector<Peak> peaks = find_peaks(sw.detunings(), r.port("T").power);
    REQUIRE(peaks.size() == 3);
    CHECK(std::abs(peaks[1].position) < mhz_to_angular(1e-3));
    CHECK(peaks[0].position == doctest::Approx(-peaks[2].position).epsilon(1e-6));
}

TEST_CASE("high-finesse references") {
    const PowerPair matched = high_finesse_reference(1.0, 1.0, 2.0, 0.0);
    CHECK(matched.transmission == doctest::Approx(1.0));
    CHECK(matched.reflection < 1e-30);
    // FWHM of the transmission is 2 kappa_C
    const PowerPair half = high_finesse_reference(1.0, 1.0, 2.0, 2.0);
    CHECK(half.transmission == doctest::Approx(0.5));

    for (double d : {-3.0, 0.0, 1.5}) {
        const PowerPair a = high_finesse_reference(0.7, 0.4, 1.3, d);
        const PowerPair b = cqed_high_finesse_reference(0.7, 0.4, 1.3, 0.0, 2.0, d, d);
        CHECK(a.transmission == doctest::Approx(b.transmission));
        CHECK(a.reflection == doctest::Approx(b.reflection));
    }
    // strong coupling: suppressed on resonance, vacuum-Rabi peaks near +-g
    const double g = 10.0;
    CHECK(cqed_high_finesse_reference(0.5, 0.5, 1.0, g, 0.5, 0.0, 0.0).transmission < 0.01);
    std::vector<double> x, y;
    for (int i = 0; i <= 2000; ++i) {
        x.push_back(-20.0 + 0.02 * i);
        y.push_back(cqed_high_finesse_reference(0.5, 0.5, 1.0, g, 0.5, x.back(), x.back()).transmission);
    }
    const std::vector<Peak> p = find_peaks(x, y);
    REQUIRE(p.size() == 2);
    CHECK(p[1].position == doctest::Approx(g).epsilon(0.02));
}

TEST_CASE("effective coupling") {
    CHECK(effective_coupling(3.0, 3.0) == doctest::Approx(3.0 / std::sqrt(2.0)));
    CHECK(effective_coupling(6.0, 6.5) == doctest::Approx(4.409).epsilon(1e-4));
    CHECK(effective_coupling(6.0, 1e9) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK_THROWS(effective_coupling(0.0, 0.0));
}
