// Minimal data-parallel loop.  Thread count comes from CVTEL_THREADS when
// set, otherwise the hardware concurrency; a count of 1 runs inline.
#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cvtel {

inline int thread_count() {
    if (const char* env = std::getenv("CVTEL_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Calls fn(i) for every i in [0, n), split into contiguous chunks.  fn must
/// be safe to call concurrently for distinct i.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    const int threads = std::min(thread_count(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace cvtel
