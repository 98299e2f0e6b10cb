#include <doctest.h>

#include "fibernet/chain.hpp"
#include "fibernet/error.hpp"
#include "fibernet/oracle.hpp"
#include "fibernet/peaks.hpp"
#include "fibernet/splitter.hpp"
#include "fibernet/validation.hpp"
#include "support.hpp"

using namespace fibernet;
using namespace fibernet::test;

namespace {

Complex random_complex(std::mt19937_64& rng) { return {uniform(rng, -1, 1), uniform(rng, -1, 1)}; }

DriveVector random_drive(std::mt19937_64& rng) {
    return {random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng)};
}

SplitNetwork random_split(std::mt19937_64& rng, bool lossless) {
    SplitNetwork n;
    n.left_chain = random_chain(rng, {4, lossless, !lossless});
    n.right_chain = random_chain(rng, {4, lossless, !lossless});
    n.splitter.reflectance = uniform(rng, 0.0, 0.9);
    return n;
}

SplitNetwork table_network(double r_bs, double g1 = 0.0, double g2 = 0.0) {
    const double v = kDefaultGroupVelocity, eta = std::sqrt(0.97);
    auto cavity = [&](std::vector<Element>& e, double l, double g) {
        e.push_back(SegmentParams{l / 2, eta, v, 0.0});
        if (g > 0.0) e.push_back(AtomParams{gamma1d_from_g(g, l, v), mhz_to_angular(5.3), 0.0, Chirality::symmetric});
        e.push_back(SegmentParams{l / 2, eta, v, 0.0});
    };
    SplitNetwork n;
    n.left_chain.elements.push_back(MirrorParams::lossless(0.8));
    cavity(n.left_chain.elements, 0.92, g1);
    n.left_chain.elements.push_back(MirrorParams::lossless(0.65));
    n.left_chain.elements.push_back(SegmentParams{0.9, eta, v, 0.0});
    n.right_chain.elements.push_back(SegmentParams{0.9, eta, v, 0.0});
    n.right_chain.elements.push_back(MirrorParams::lossless(0.8));
    cavity(n.right_chain.elements, 1.38, g2);
    n.right_chain.elements.push_back(MirrorParams::lossless(0.85));
    n.splitter.reflectance = r_bs;
    return n;
}

bool close(const SplitterOutputs& a, const SplitterOutputs& b, double tol) {
    return cdiff(a.e1_out, b.e1_out) < tol && cdiff(a.e2_out, b.e2_out) < tol && cdiff(a.eu_out, b.eu_out) < tol &&
           cdiff(a.ed_out, b.ed_out) < tol;
}

}  // namespace

TEST_CASE("4-port splitter scattering") {
    const Matrix4 pass = splitter_scattering_4port({0.0});
    // rows (a2, d_out, b1, u_out), columns (a1, d_in, b2, u_in)
    CHECK(pass[2][0] == 1.0);
    CHECK(pass[0][2] == 1.0);
    CHECK(pass[1][3] == 1.0);
    CHECK(pass[3][1] == 1.0);
    CHECK(pass[1][0] == 0.0);
    const Matrix4 tap = splitter_scattering_4port({1.0});
    CHECK(tap[2][0] == 0.0);
    CHECK(tap[1][0] == Complex(0, 1));
    CHECK(tap[3][2] == Complex(0, 1));

    for (double r : {0.0, 0.01, 0.3, 0.5, 0.99, 1.0}) {
        const Matrix4 b = splitter_scattering_4port({r});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Complex acc{};
                for (int k = 0; k < 4; ++k) acc += std::conj(b[k][i]) * b[k][j];
                CHECK(cdiff(acc, i == j ? 1.0 : 0.0) < 1e-15);
            }
    }
    CHECK_THROWS_AS(splitter_scattering_4port({1.5}), Error);
}

TEST_CASE("closed forms agree with the general solution") {
    std::mt19937_64 rng(51);
    for (int c = 0; c < 100; ++c) {
        const SplitNetwork n = random_split(rng, false);
        const double d = mhz_to_angular(uniform(rng, -50, 50));
        const TransferMatrix t1 = compose(n.left_chain, d), t2 = compose(n.right_chain, d);
        const Complex a = random_complex(rng);
        const SplitterOutputs gl = solve_outputs(t1, t2, n.splitter, {a, 0.0, 0.0, 0.0});
        const SplitterOutputs gu = solve_outputs(t1, t2, n.splitter, {0.0, 0.0, a, 0.0});
        CHECK(close(solve_drive_left(t1, t2, n.splitter, a), gl, 1e-10));
        CHECK(close(solve_drive_up(t1, t2, n.splitter, a), gu, 1e-10));
        // left drive: each tap output is i sqrt(R) times the field arriving at the splitter
        const SplitInterfaceField f = boundary_solve_oracle(n, d, {a, 0.0, 0.0, 0.0});
        const Complex ir(0.0, std::sqrt(n.splitter.reflectance));
        CHECK(cdiff(gl.ed_out, ir * f.left.rightward.back()) < 1e-10);
        CHECK(cdiff(gl.eu_out, ir * f.right.leftward.front()) < 1e-10);
    }
}

TEST_CASE("general solution matches the split-network oracle") {
    std::mt19937_64 rng(53);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const SplitNetwork n = random_split(rng, false);
        for (int k = 0; k < 10; ++k) {
            const double d = mhz_to_angular(uniform(rng, -80, 80));
            const DriveVector in = random_drive(rng);
            const SplitterOutputs s = solve_outputs(n, in, d);
            const SplitInterfaceField o = boundary_solve_oracle(n, d, in);
            worst = std::max({worst, cdiff(s.e1_out, o.right.e1_out()), cdiff(s.e2_out, o.left.e2_out()),
                              cdiff(s.eu_out, o.eu_out), cdiff(s.ed_out, o.ed_out)});
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("linearity in the drive") {
    std::mt19937_64 rng(57);
    const SplitNetwork n = random_split(rng, false);
    for (int k = 0; k < 20; ++k) {
        const double d = mhz_to_angular(uniform(rng, -30, 30));
        const DriveVector a = random_drive(rng), b = random_drive(rng);
        const Complex c = random_complex(rng);
        const DriveVector sum{a.e1_in + c * b.e1_in, a.e2_in + c * b.e2_in, a.eu_in + c * b.eu_in, a.ed_in + c * b.ed_in};
        const SplitterOutputs x = solve_outputs(n, a, d), y = solve_outputs(n, b, d), z = solve_outputs(n, sum, d);
        CHECK(cdiff(z.e1_out, x.e1_out + c * y.e1_out) < 1e-12);
        CHECK(cdiff(z.e2_out, x.e2_out + c * y.e2_out) < 1e-12);
        CHECK(cdiff(z.eu_out, x.eu_out + c * y.eu_out) < 1e-12);
        CHECK(cdiff(z.ed_out, x.ed_out + c * y.ed_out) < 1e-12);
    }
}

TEST_CASE("a transparent splitter reduces to the plain chain") {
    std::mt19937_64 rng(59);
    for (int c = 0; c < 50; ++c) {
        SplitNetwork n = random_split(rng, false);
        n.splitter.reflectance = 0.0;
        NetworkSpec whole = n.left_chain;
        whole.elements.insert(whole.elements.end(), n.right_chain.elements.begin(), n.right_chain.elements.end());
        const double d = mhz_to_angular(uniform(rng, -50, 50));
        const ScatteringMatrix s = transfer_to_scattering(compose(whole, d));
        const SplitterOutputs o = solve_outputs(n, {1.0, 0.0, 0.0, 0.0}, d);
        CHECK(cdiff(o.e1_out, s.s11) < 1e-10);
        CHECK(cdiff(o.e2_out, s.s21) < 1e-10);
        CHECK(std::abs(o.eu_out) == 0.0);
        CHECK(std::abs(o.ed_out) == 0.0);
    }
}

TEST_CASE("insert_splitter divides a segment") {
    const NetworkSpec fp{"fp", {MirrorParams::lossless(0.9), SegmentParams{2.0, 0.98, kDefaultGroupVelocity, 0.0},
                                MirrorParams::lossless(0.7)}};
    const SplitNetwork n = insert_splitter(fp, 1, {0.0}, 0.25);
    REQUIRE(n.left_chain.elements.size() == 2);
    REQUIRE(n.right_chain.elements.size() == 2);
    const auto& a = std::get<SegmentParams>(n.left_chain.elements[1]);
    const auto& b = std::get<SegmentParams>(n.right_chain.elements[0]);
    CHECK(a.length == doctest::Approx(0.5));
    CHECK(b.length == doctest::Approx(1.5));
    CHECK(a.efficiency * b.efficiency == doctest::Approx(0.98));
    for (double d : {0.0, 3e7, -1e8}) {
        const ScatteringMatrix s = transfer_to_scattering(compose(fp, d));
        CHECK(cdiff(solve_outputs(n, {1.0, 0.0, 0.0, 0.0}, d).e1_out, s.s11) < 1e-12);
    }
    CHECK_THROWS_AS(insert_splitter(fp, 0, {0.1}), Error);
}

TEST_CASE("lossless split networks conserve power") {
    std::mt19937_64 rng(61);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const SplitNetwork n = random_split(rng, true);
        for (int k = 0; k < 20; ++k) {
            const double d = mhz_to_angular(uniform(rng, -80, 80));
            const DriveVector in = random_drive(rng);
            const SplitterOutputs o = solve_outputs(n, in, d);
            const double out = std::norm(o.e1_out) + std::norm(o.e2_out) + std::norm(o.eu_out) + std::norm(o.ed_out);
            worst = std::max(worst, std::abs(out - in.total_power()) / in.total_power());
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("loop resonance without loss is flagged") {
    // two perfect mirrors facing a lossless splitter: a closed lossless loop
    SplitNetwork n;
    n.left_chain = {"l", {MirrorParams{1.0, 0.0}, SegmentParams{1.0, 1.0}}};
    n.right_chain = {"r", {SegmentParams{1.0, 1.0}, MirrorParams{1.0, 0.0}}};
    n.splitter.reflectance = 0.0;
    const double fsr = free_spectral_range(2.0, kDefaultGroupVelocity);
    const SpectraResult r = splitter_spectrum(n, {0.0, 0.0, 1.0, 0.0}, std::vector<double>{0.0, 0.3 * fsr});
    CHECK(r.flags[0] != point_ok);
}

TEST_CASE("spectra normalize by the total input power") {
    const SplitNetwork n = table_network(0.01);
    const std::vector<double> grid{0.0, mhz_to_angular(3.0)};
    const SpectraResult a = splitter_spectrum(n, {0.0, 0.0, 1.0, 0.0}, grid);
    const SpectraResult b = splitter_spectrum(n, {0.0, 0.0, Complex(0, 3.0), 0.0}, grid);
    for (const char* port : {"E1_out", "E2_out", "Eu_out", "Ed_out"})
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(a.port(port).power[i] == doctest::Approx(b.port(port).power[i]).epsilon(1e-13));
}

// Cavity 2 is nearly impedance matched with these values (sqrt(R3) ~ sqrt(R4) eta),
// so almost nothing returns toward the up port on resonance.
TEST_CASE("empty system driven from the left: tap ports on resonance") {
    const SplitNetwork n = table_network(0.01);
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(mhz_to_angular(-4.0 + 0.02 * i));
    const SpectraResult r = splitter_spectrum(n, {1.0, 0.0, 0.0, 0.0}, grid);
    const std::vector<double>& up = r.port("Eu_out").power;
    const std::vector<double>& down = r.port("Ed_out").power;
    CHECK(up[200] < 1e-6 * up[0]);
    CHECK(up[200] <= *std::min_element(up.begin(), up.end()));
    CHECK(down[200] > down[195]);
    CHECK(down[200] > down[205]);
}

TEST_CASE("drive up, empty cavities: transmission peak at zero detuning") {
    const SplitNetwork n = table_network(0.01);
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(mhz_to_angular(-25.0 + 0.025 * i));
    const SpectraResult r = splitter_spectrum(n, {0.0, 0.0, 1.0, 0.0}, grid);
    const std::vector<Peak> peaks = find_peaks(grid, r.port("E1_out").power);
    bool centre = false;
    for (const Peak& p : peaks) centre = centre || std::abs(angular_to_mhz(p.position)) < 0.05;
    CHECK(centre);
}
