#include "fibernet/kernels.hpp"

#if defined(FIBERNET_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace fibernet::kernels {

#if defined(FIBERNET_HAVE_AVX2)
namespace {

constexpr std::size_t kLanes = 4;

BatchView tail(BatchView v, std::size_t from) {
    for (std::size_t k = 0; k < 4; ++k) {
        v.re[k] += from;
        v.im[k] += from;
    }
    v.size -= from;
    return v;
}

ConstBatchView tail(ConstBatchView v, std::size_t from) {
    for (std::size_t k = 0; k < 4; ++k) {
        v.re[k] += from;
        v.im[k] += from;
    }
    v.size -= from;
    return v;
}

struct C {
    __m256d re, im;
};

inline C load(const double* re, const double* im, std::size_t i) {
    return {_mm256_loadu_pd(re + i), _mm256_loadu_pd(im + i)};
}

inline void store(double* re, double* im, std::size_t i, C z) {
    _mm256_storeu_pd(re + i, z.re);
    _mm256_storeu_pd(im + i, z.im);
}

inline C mul(C x, C y) {
    return {_mm256_sub_pd(_mm256_mul_pd(x.re, y.re), _mm256_mul_pd(x.im, y.im)),
            _mm256_add_pd(_mm256_mul_pd(x.re, y.im), _mm256_mul_pd(x.im, y.re))};
}

inline C add(C x, C y) { return {_mm256_add_pd(x.re, y.re), _mm256_add_pd(x.im, y.im)}; }

void product(C a11, C a12, C a21, C a22, C b11, C b12, C b21, C b22, BatchView a, std::size_t i) {
    store(a.re[e11], a.im[e11], i, add(mul(a11, b11), mul(a12, b21)));
    store(a.re[e12], a.im[e12], i, add(mul(a11, b12), mul(a12, b22)));
    store(a.re[e21], a.im[e21], i, add(mul(a21, b11), mul(a22, b21)));
    store(a.re[e22], a.im[e22], i, add(mul(a21, b12), mul(a22, b22)));
}

void multiply(BatchView a, ConstBatchView b) {
    std::size_t i = 0;
    for (; i + kLanes <= a.size; i += kLanes) {
        product(load(a.re[e11], a.im[e11], i), load(a.re[e12], a.im[e12], i), load(a.re[e21], a.im[e21], i),
                load(a.re[e22], a.im[e22], i), load(b.re[e11], b.im[e11], i), load(b.re[e12], b.im[e12], i),
                load(b.re[e21], b.im[e21], i), load(b.re[e22], b.im[e22], i), a, i);
    }
    if (i < a.size) scalar_table().multiply(tail(a, i), tail(b, i));
}

void multiply_uniform(BatchView a, const Uniform& m) {
    const C b11{_mm256_set1_pd(m[0]), _mm256_set1_pd(m[1])};
    const C b12{_mm256_set1_pd(m[2]), _mm256_set1_pd(m[3])};
    const C b21{_mm256_set1_pd(m[4]), _mm256_set1_pd(m[5])};
    const C b22{_mm256_set1_pd(m[6]), _mm256_set1_pd(m[7])};
    std::size_t i = 0;
    for (; i + kLanes <= a.size; i += kLanes) {
        product(load(a.re[e11], a.im[e11], i), load(a.re[e12], a.im[e12], i), load(a.re[e21], a.im[e21], i),
                load(a.re[e22], a.im[e22], i), b11, b12, b21, b22, a, i);
    }
    if (i < a.size) scalar_table().multiply_uniform(tail(a, i), m);
}

void multiply_diagonal(BatchView a, DiagonalView d) {
    std::size_t i = 0;
    for (; i + kLanes <= a.size; i += kLanes) {
        const C d1 = load(d.re1, d.im1, i);
        const C d2 = load(d.re2, d.im2, i);
        store(a.re[e11], a.im[e11], i, mul(load(a.re[e11], a.im[e11], i), d1));
        store(a.re[e21], a.im[e21], i, mul(load(a.re[e21], a.im[e21], i), d1));
        store(a.re[e12], a.im[e12], i, mul(load(a.re[e12], a.im[e12], i), d2));
        store(a.re[e22], a.im[e22], i, mul(load(a.re[e22], a.im[e22], i), d2));
    }
    if (i < a.size) {
        DiagonalView rest{d.re1 + i, d.im1 + i, d.re2 + i, d.im2 + i, d.size - i};
        scalar_table().multiply_diagonal(tail(a, i), rest);
    }
}

void atom_matrices(const double* delta, AtomBatchParams p, BatchView out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d ratio = _mm256_set1_pd(p.ratio);
    const __m256d neg_ratio = _mm256_set1_pd(-p.ratio);
    const __m256d scale = _mm256_set1_pd(p.scale);
    const __m256d offset = _mm256_set1_pd(p.offset);
    std::size_t i = 0;
    for (; i + kLanes <= out.size; i += kLanes) {
        const __m256d x = _mm256_mul_pd(scale, _mm256_add_pd(_mm256_loadu_pd(delta + i), offset));
        const __m256d den = _mm256_add_pd(_mm256_mul_pd(x, x), one);
        const __m256d re = _mm256_div_pd(neg_ratio, den);
        const __m256d im = _mm256_div_pd(_mm256_mul_pd(neg_ratio, x), den);
        const __m256d neg_im = _mm256_sub_pd(zero, im);
        C m11{_mm256_sub_pd(one, re), neg_im}, m12{_mm256_sub_pd(zero, re), neg_im};
        C m21{re, im}, m22{_mm256_add_pd(one, re), im};
        if (p.chirality == 1) {
            m21 = {zero, zero};
            m22 = {one, zero};
        } else if (p.chirality == 2) {
            m11 = {one, zero};
            m12 = {zero, zero};
        }
        store(out.re[e11], out.im[e11], i, m11);
        store(out.re[e12], out.im[e12], i, m12);
        store(out.re[e21], out.im[e21], i, m21);
        store(out.re[e22], out.im[e22], i, m22);
    }
    (void)ratio;
    if (i < out.size) scalar_table().atom_matrices(delta + i, p, tail(out, i));
}

void to_scattering(ConstBatchView t, BatchView s, std::uint8_t* flag) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d tiny = _mm256_set1_pd(1e-300);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= t.size; i += kLanes) {
        const __m256d a = _mm256_loadu_pd(t.re[e11] + i);
        const __m256d b = _mm256_loadu_pd(t.im[e11] + i);
        const __m256d big = _mm256_max_pd(_mm256_andnot_pd(sign, a), _mm256_andnot_pd(sign, b));
        const int ok = _mm256_movemask_pd(_mm256_cmp_pd(big, tiny, _CMP_GE_OQ));
        for (std::size_t k = 0; k < kLanes; ++k) flag[i + k] = ((ok >> k) & 1) ? 0 : 1;

        const __m256d as = _mm256_div_pd(a, big), bs = _mm256_div_pd(b, big);
        const __m256d n = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(as, as), _mm256_mul_pd(bs, bs)), big);
        const C inv{_mm256_div_pd(as, n), _mm256_sub_pd(zero, _mm256_div_pd(bs, n))};

        const C t11{a, b};
        const C t12 = load(t.re[e12], t.im[e12], i);
        const C t21 = load(t.re[e21], t.im[e21], i);
        const C t22 = load(t.re[e22], t.im[e22], i);
        const C p = mul(t11, t22), q = mul(t12, t21);
        const C det{_mm256_sub_pd(p.re, q.re), _mm256_sub_pd(p.im, q.im)};

        const C m12 = mul(t12, inv);
        store(s.re[e11], s.im[e11], i, inv);
        store(s.re[e12], s.im[e12], i, {_mm256_sub_pd(zero, m12.re), _mm256_sub_pd(zero, m12.im)});
        store(s.re[e21], s.im[e21], i, mul(t21, inv));
        store(s.re[e22], s.im[e22], i, mul(det, inv));
    }
    if (i < t.size) scalar_table().to_scattering(tail(t, i), tail(s, i), flag + i);
}

constexpr KernelTable kAvx2{"avx2", multiply, multiply_diagonal, multiply_uniform, atom_matrices, to_scattering};

}  // namespace

const KernelTable* avx2_table() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace fibernet::kernels
