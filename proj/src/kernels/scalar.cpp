#include <cmath>

#include "fibernet/kernels.hpp"

namespace fibernet::kernels {
namespace {

void multiply(BatchView a, ConstBatchView b) {
    for (std::size_t i = 0; i < a.size; ++i) {
        const double ar11 = a.re[e11][i], ai11 = a.im[e11][i], ar12 = a.re[e12][i], ai12 = a.im[e12][i];
        const double ar21 = a.re[e21][i], ai21 = a.im[e21][i], ar22 = a.re[e22][i], ai22 = a.im[e22][i];
        const double br11 = b.re[e11][i], bi11 = b.im[e11][i], br12 = b.re[e12][i], bi12 = b.im[e12][i];
        const double br21 = b.re[e21][i], bi21 = b.im[e21][i], br22 = b.re[e22][i], bi22 = b.im[e22][i];

        a.re[e11][i] = (ar11 * br11 - ai11 * bi11) + (ar12 * br21 - ai12 * bi21);
        a.im[e11][i] = (ar11 * bi11 + ai11 * br11) + (ar12 * bi21 + ai12 * br21);
        a.re[e12][i] = (ar11 * br12 - ai11 * bi12) + (ar12 * br22 - ai12 * bi22);
        a.im[e12][i] = (ar11 * bi12 + ai11 * br12) + (ar12 * bi22 + ai12 * br22);
        a.re[e21][i] = (ar21 * br11 - ai21 * bi11) + (ar22 * br21 - ai22 * bi21);
        a.im[e21][i] = (ar21 * bi11 + ai21 * br11) + (ar22 * bi21 + ai22 * br21);
        a.re[e22][i] = (ar21 * br12 - ai21 * bi12) + (ar22 * br22 - ai22 * bi22);
        a.im[e22][i] = (ar21 * bi12 + ai21 * br12) + (ar22 * bi22 + ai22 * br22);
    }
}

void multiply_diagonal(BatchView a, DiagonalView d) {
    for (std::size_t i = 0; i < a.size; ++i) {
        const double r1 = d.re1[i], j1 = d.im1[i], r2 = d.re2[i], j2 = d.im2[i];
        for (std::size_t row : {e11, e21}) {
            const double x = a.re[row][i], y = a.im[row][i];
            a.re[row][i] = x * r1 - y * j1;
            a.im[row][i] = x * j1 + y * r1;
        }
        for (std::size_t row : {e12, e22}) {
            const double x = a.re[row][i], y = a.im[row][i];
            a.re[row][i] = x * r2 - y * j2;
            a.im[row][i] = x * j2 + y * r2;
        }
    }
}

void multiply_uniform(BatchView a, const Uniform& m) {
    const double br11 = m[0], bi11 = m[1], br12 = m[2], bi12 = m[3];
    const double br21 = m[4], bi21 = m[5], br22 = m[6], bi22 = m[7];
    for (std::size_t i = 0; i < a.size; ++i) {
        const double ar11 = a.re[e11][i], ai11 = a.im[e11][i], ar12 = a.re[e12][i], ai12 = a.im[e12][i];
        const double ar21 = a.re[e21][i], ai21 = a.im[e21][i], ar22 = a.re[e22][i], ai22 = a.im[e22][i];

        a.re[e11][i] = (ar11 * br11 - ai11 * bi11) + (ar12 * br21 - ai12 * bi21);
        a.im[e11][i] = (ar11 * bi11 + ai11 * br11) + (ar12 * bi21 + ai12 * br21);
        a.re[e12][i] = (ar11 * br12 - ai11 * bi12) + (ar12 * br22 - ai12 * bi22);
        a.im[e12][i] = (ar11 * bi12 + ai11 * br12) + (ar12 * bi22 + ai12 * br22);
        a.re[e21][i] = (ar21 * br11 - ai21 * bi11) + (ar22 * br21 - ai22 * bi21);
        a.im[e21][i] = (ar21 * bi11 + ai21 * br11) + (ar22 * bi21 + ai22 * br21);
        a.re[e22][i] = (ar21 * br12 - ai21 * bi12) + (ar22 * br22 - ai22 * bi22);
        a.im[e22][i] = (ar21 * bi12 + ai21 * br12) + (ar22 * bi22 + ai22 * br22);
    }
}

// xi = -ratio / (x + i) with x = scale * (delta + offset), so
// i xi = (-ratio - i ratio x) / (x^2 + 1).
void atom_matrices(const double* delta, AtomBatchParams p, BatchView out) {
    for (std::size_t i = 0; i < out.size; ++i) {
        const double x = p.scale * (delta[i] + p.offset);
        const double den = x * x + 1.0;
        const double re = -p.ratio / den;
        const double im = (-p.ratio * x) / den;
        double r11 = 1.0 - re, i11 = -im, r12 = -re, i12 = -im;
        double r21 = re, i21 = im, r22 = 1.0 + re, i22 = im;
        if (p.chirality == 1) {
            r21 = 0.0; i21 = 0.0; r22 = 1.0; i22 = 0.0;
        } else if (p.chirality == 2) {
            r11 = 1.0; i11 = 0.0; r12 = 0.0; i12 = 0.0;
        }
        out.re[e11][i] = r11; out.im[e11][i] = i11;
        out.re[e12][i] = r12; out.im[e12][i] = i12;
        out.re[e21][i] = r21; out.im[e21][i] = i21;
        out.re[e22][i] = r22; out.im[e22][i] = i22;
    }
}

void to_scattering(ConstBatchView t, BatchView s, std::uint8_t* flag) {
    for (std::size_t i = 0; i < t.size; ++i) {
        const double a = t.re[e11][i], b = t.im[e11][i];
        const double big = std::fmax(std::fabs(a), std::fabs(b));
        const bool bad = !(big >= 1e-300);
        flag[i] = bad ? 1 : 0;
        // 1/t11 = conj(t11) / |t11|^2, scaled by big to avoid overflow
        const double as = a / big, bs = b / big;
        const double n = (as * as + bs * bs) * big;
        const double ir = as / n, ii = -bs / n;

        const double r12 = t.re[e12][i], j12 = t.im[e12][i];
        const double r21 = t.re[e21][i], j21 = t.im[e21][i];
        const double r22 = t.re[e22][i], j22 = t.im[e22][i];
        const double dr = (a * r22 - b * j22) - (r12 * r21 - j12 * j21);
        const double di = (a * j22 + b * r22) - (r12 * j21 + j12 * r21);

        s.re[e11][i] = ir;
        s.im[e11][i] = ii;
        s.re[e12][i] = -(r12 * ir - j12 * ii);
        s.im[e12][i] = -(r12 * ii + j12 * ir);
        s.re[e21][i] = r21 * ir - j21 * ii;
        s.im[e21][i] = r21 * ii + j21 * ir;
        s.re[e22][i] = dr * ir - di * ii;
        s.im[e22][i] = dr * ii + di * ir;
    }
}

constexpr KernelTable kScalar{"scalar", multiply, multiply_diagonal, multiply_uniform, atom_matrices, to_scattering};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace fibernet::kernels
