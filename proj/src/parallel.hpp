#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fibernet::detail {

// Runs fn(begin, end) over contiguous chunks of [0, n); chunk results land in
// caller-owned slots so output order never depends on scheduling.
template <class Fn>
void for_chunks(std::size_t n, unsigned jobs, Fn&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs, n / 64 + 1));
    if (workers == 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * step), hi = std::min(n, lo + step);
        pool.emplace_back([&, w, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace fibernet::detail
