#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace swarmlab {

// Runs fn(k) for k in [0, count) over `workers` threads, static block split.
// Callers own determinism: each k must write only to its own slots.
inline void parallel_for(std::int64_t count, int workers,
                         const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    if (workers <= 1 || count == 1) {
        for (std::int64_t k = 0; k < count; ++k) fn(k);
        return;
    }
    const int nw = static_cast<int>(std::min<std::int64_t>(workers, count));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::int64_t block = (count + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
        const std::int64_t lo = w * block;
        const std::int64_t hi = std::min<std::int64_t>(count, lo + block);
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t k = lo; k < hi; ++k) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace swarmlab
