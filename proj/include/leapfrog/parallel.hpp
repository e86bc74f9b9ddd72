#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace lf::numerics {

// index-chunked worker pool; results must be written to disjoint slots so
// the reduction is order-independent
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nw = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nw) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace lf::numerics
