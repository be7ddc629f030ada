#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qbd {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to disjoint, preallocated slots indexed by i, which keeps any
/// subsequent reduction order fixed and the output deterministic.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace qbd
