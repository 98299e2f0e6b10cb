#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "fibernet/elements.hpp"

namespace fibernet::test {

inline double cdiff(Complex a, Complex b) { return std::abs(a - b); }

inline double mdiff(const TransferMatrix& a, const TransferMatrix& b) {
    return std::max({cdiff(a.t11, b.t11), cdiff(a.t12, b.t12), cdiff(a.t21, b.t21), cdiff(a.t22, b.t22)});
}

inline double mdiff(const ScatteringMatrix& a, const ScatteringMatrix& b) {
    return std::max({cdiff(a.s11, b.s11), cdiff(a.s12, b.s12), cdiff(a.s21, b.s21), cdiff(a.s22, b.s22)});
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace fibernet::test
