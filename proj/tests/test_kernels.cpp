#include <doctest.h>

#include <cstring>
#include <vector>

#include "fibernet/chain.hpp"
#include "fibernet/kernels.hpp"
#include "fibernet/validation.hpp"
#include "support.hpp"

using namespace fibernet;
using namespace fibernet::kernels;
using namespace fibernet::test;

namespace {

constexpr std::size_t kN = 37;  // odd on purpose: exercises the scalar tail

void fill(MatrixBatch& b, std::mt19937_64& rng) {
    BatchView v = b.view();
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < v.size; ++i) {
            v.re[k][i] = uniform(rng, -3, 3);
            v.im[k][i] = uniform(rng, -3, 3);
        }
}

bool same(const MatrixBatch& a, const MatrixBatch& b) {
    const ConstBatchView x = a.view(), y = b.view();
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < x.size; ++i)
            if (!(x.re[k][i] == y.re[k][i] && x.im[k][i] == y.im[k][i])) return false;
    return true;
}

Complex at(const MatrixBatch& b, Entry e, std::size_t i) { return {b.view().re[e][i], b.view().im[e][i]}; }

TransferMatrix matrix_at(const MatrixBatch& b, std::size_t i) {
    return {at(b, e11, i), at(b, e12, i), at(b, e21, i), at(b, e22, i)};
}

}  // namespace

TEST_CASE("scalar kernels match complex arithmetic") {
    std::mt19937_64 rng(5);
    MatrixBatch a(kN), b(kN);
    fill(a, rng);
    fill(b, rng);
    std::vector<TransferMatrix> expect;
    for (std::size_t i = 0; i < kN; ++i) expect.push_back(matrix_at(a, i) * matrix_at(b, i));
    scalar_table().multiply(a.view(), b.view());
    for (std::size_t i = 0; i < kN; ++i) CHECK(mdiff(matrix_at(a, i), expect[i]) < 1e-13);

    std::vector<double> delta(kN);
    for (double& d : delta) d = uniform(rng, -1e8, 1e8);
    const AtomParams atom{mhz_to_angular(3.0), mhz_to_angular(5.3), mhz_to_angular(1.0), Chirality::symmetric};
    for (int chir = 0; chir < 3; ++chir) {
        AtomParams p = atom;
        p.chirality = static_cast<Chirality>(chir);
        const AtomBatchParams bp{p.guided_decay / p.external_decay, 2.0 / p.external_decay, p.detuning, chir};
        scalar_table().atom_matrices(delta.data(), bp, a.view());
        for (std::size_t i = 0; i < kN; ++i) {
            AtomParams q = p;
            q.detuning = delta[i] + p.detuning;
            CHECK(mdiff(matrix_at(a, i), atom_transfer(atom_polarizability(q), p.chirality)) < 1e-14);
        }
    }

    fill(a, rng);
    std::vector<std::uint8_t> flag(kN);
    scalar_table().to_scattering(a.view(), b.view(), flag.data());
    for (std::size_t i = 0; i < kN; ++i) {
        const ScatteringMatrix s = transfer_to_scattering(matrix_at(a, i));
        CHECK(flag[i] == 0);
        CHECK(mdiff(ScatteringMatrix{at(b, e11, i), at(b, e12, i), at(b, e21, i), at(b, e22, i)}, s) < 1e-12);
    }
    a.view().re[e11][3] = 0.0;
    a.view().im[e11][3] = 0.0;
    scalar_table().to_scattering(a.view(), b.view(), flag.data());
    CHECK(flag[3] == 1);
}

TEST_CASE("vector kernels are bit-identical to the scalar reference") {
    const std::vector<const KernelTable*> tables = available();
    REQUIRE(!tables.empty());
    CHECK(tables.front()->name == "scalar");
    MESSAGE("kernel variants: " << tables.size() << ", active: " << active().name);

    for (const KernelTable* t : tables) {
        CAPTURE(t->name);
        std::mt19937_64 rng(99);
        for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4}, kN, std::size_t{256}}) {
            MatrixBatch a(n), b(n), a2(n), out1(n), out2(n);
            fill(a, rng);
            fill(b, rng);
            a2 = a;

            scalar_table().multiply(a.view(), b.view());
            t->multiply(a2.view(), b.view());
            CHECK(same(a, a2));

            std::vector<double> d1(n), d2(n), d3(n), d4(n);
            for (std::size_t i = 0; i < n; ++i) {
                d1[i] = uniform(rng, -1, 1);
                d2[i] = uniform(rng, -1, 1);
                d3[i] = uniform(rng, -1, 1);
                d4[i] = uniform(rng, -1, 1);
            }
            const DiagonalView dv{d1.data(), d2.data(), d3.data(), d4.data(), n};
            scalar_table().multiply_diagonal(a.view(), dv);
            t->multiply_diagonal(a2.view(), dv);
            CHECK(same(a, a2));

            Uniform u;
            for (double& x : u) x = uniform(rng, -2, 2);
            scalar_table().multiply_uniform(a.view(), u);
            t->multiply_uniform(a2.view(), u);
            CHECK(same(a, a2));

            for (int chir = 0; chir < 3; ++chir) {
                const AtomBatchParams p{0.7, 2.0 / 3e7, 1e6, chir};
                for (double& x : d1) x = uniform(rng, -1e8, 1e8);
                scalar_table().atom_matrices(d1.data(), p, out1.view());
                t->atom_matrices(d1.data(), p, out2.view());
                CHECK(same(out1, out2));
            }

            if (n > 2) {
                a.view().re[e11][1] = 0.0;
                a.view().im[e11][1] = 0.0;
            }
            std::vector<std::uint8_t> f1(n), f2(n);
            scalar_table().to_scattering(a.view(), out1.view(), f1.data());
            t->to_scattering(a.view(), out2.view(), f2.data());
            CHECK(f1 == f2);
            // the zeroed entry produces NaN in both; compare the rest
            if (n > 2) {
                for (MatrixBatch* m : {&out1, &out2})
                    for (std::size_t k = 0; k < 4; ++k) m->view().re[k][1] = m->view().im[k][1] = 0.0;
            }
            CHECK(same(out1, out2));
        }
    }
}

TEST_CASE("batched composition agrees with per-point composition") {
    std::mt19937_64 rng(2024);
    std::vector<double> grid;
    for (int i = 0; i < 41; ++i) grid.push_back(mhz_to_angular(-60.0 + 3.0 * i));
    for (int c = 0; c < 50; ++c) {
        const NetworkSpec chain = random_chain(rng, {6, false, true});
        for (const KernelTable* t : available()) {
            MatrixBatch batch;
            compose_batch(chain, grid, batch, *t);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const TransferMatrix ref = compose(chain, grid[i]);
                const double scale = std::max(1.0, std::abs(ref.t11));
                CHECK(mdiff(matrix_at(batch, i), ref) / scale < 1e-12);
            }
        }
    }
}
