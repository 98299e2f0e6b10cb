#pragma once

// Batched 2x2 complex matrix arithmetic over a detuning grid, stored as
// structure-of-arrays. Every kernel variant performs the same IEEE operations
// in the same order (no FMA contraction), so results are bit-identical.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fibernet::kernels {

enum Entry : std::size_t { e11 = 0, e12 = 1, e21 = 2, e22 = 3 };

struct BatchView {
    std::array<double*, 4> re{};
    std::array<double*, 4> im{};
    std::size_t size = 0;
};

struct ConstBatchView {
    std::array<const double*, 4> re{};
    std::array<const double*, 4> im{};
    std::size_t size = 0;

    ConstBatchView() = default;
    ConstBatchView(const BatchView& v) : size(v.size) {  // NOLINT(google-explicit-constructor)
        for (std::size_t k = 0; k < 4; ++k) {
            re[k] = v.re[k];
            im[k] = v.im[k];
        }
    }
};

// diag(d1, d2) per point.
struct DiagonalView {
    const double* re1 = nullptr;
    const double* im1 = nullptr;
    const double* re2 = nullptr;
    const double* im2 = nullptr;
    std::size_t size = 0;
};

// One matrix shared by every point: {re11, im11, re12, im12, re21, im21, re22, im22}.
using Uniform = std::array<double, 8>;

struct AtomBatchParams {
    double ratio = 0.0;         // Gamma_1D / Gamma'
    double scale = 0.0;         // 2 / Gamma'
    double offset = 0.0;        // added to the probe detuning
    int chirality = 0;          // 0 symmetric, 1 right only, 2 left only
};

class MatrixBatch {
public:
    explicit MatrixBatch(std::size_t n = 0) { resize(n); }
    void resize(std::size_t n);
    void set_identity();
    std::size_t size() const { return n_; }
    BatchView view();
    ConstBatchView view() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct KernelTable {
    std::string_view name;
    // acc <- acc * rhs
    void (*multiply)(BatchView acc, ConstBatchView rhs);
    void (*multiply_diagonal)(BatchView acc, DiagonalView rhs);
    void (*multiply_uniform)(BatchView acc, const Uniform& rhs);
    // out <- atom transfer matrix at each detuning
    void (*atom_matrices)(const double* detuning, AtomBatchParams p, BatchView out);
    // s <- scattering form of t; flag[i] = 1 where max(|Re t11|, |Im t11|) < 1e-300
    void (*to_scattering)(ConstBatchView t, BatchView s, std::uint8_t* flag);
};

const KernelTable& scalar_table();
// Null when the build lacks the variant or the CPU does not support it.
const KernelTable* avx2_table();

// All variants usable on this machine, scalar first.
std::vector<const KernelTable*> available();

// Chosen once: best supported variant, overridable with FIBERNET_KERNELS=scalar|avx2.
const KernelTable& active();

}  // namespace fibernet::kernels
