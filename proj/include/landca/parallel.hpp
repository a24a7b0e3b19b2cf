#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace landca {

// Static contiguous partition of [0, n) across `threads` workers. Chunk
// boundaries depend only on (n, threads), and callers must write results into
// per-index or per-chunk slots, so outputs never depend on scheduling.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
    if (n == 0) return;
    const std::size_t workers =
        threads < 2 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers == 1) {
        chunk_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t base = n / workers, rem = n % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t end = begin + base + (w < rem ? 1 : 0);
        pool.emplace_back(chunk_fn, begin, end);
        begin = end;
    }
    for (auto& t : pool) t.join();
}

}  // namespace landca
