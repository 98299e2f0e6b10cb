#include <algorithm>
#include <cstdlib>
#include <string>

#include "fibernet/kernels.hpp"

namespace fibernet::kernels {

void MatrixBatch::resize(std::size_t n) {
    n_ = n;
    data_.assign(8 * n, 0.0);
}

void MatrixBatch::set_identity() {
    std::fill(data_.begin(), data_.end(), 0.0);
    std::fill_n(data_.begin(), n_, 1.0);                       // re11
    std::fill_n(data_.begin() + 3 * 2 * n_, n_, 1.0);          // re22
}

BatchView MatrixBatch::view() {
    BatchView v;
    v.size = n_;
    for (std::size_t k = 0; k < 4; ++k) {
        v.re[k] = data_.data() + 2 * k * n_;
        v.im[k] = data_.data() + (2 * k + 1) * n_;
    }
    return v;
}

ConstBatchView MatrixBatch::view() const {
    ConstBatchView v;
    v.size = n_;
    for (std::size_t k = 0; k < 4; ++k) {
        v.re[k] = data_.data() + 2 * k * n_;
        v.im[k] = data_.data() + (2 * k + 1) * n_;
    }
    return v;
}

std::vector<const KernelTable*> available() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (const KernelTable* t = avx2_table()) out.push_back(t);
    return out;
}

namespace {

const KernelTable& choose() {
    if (const char* env = std::getenv("FIBERNET_KERNELS")) {
        const std::string want(env);
        for (const KernelTable* t : available())
            if (t->name == want) return *t;
    }
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = choose();
    return table;
}

}  // namespace fibernet::kernels
