#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace primelab {

// Worker count: PRIMELAB_THREADS if set, otherwise available parallelism.
inline unsigned thread_count() {
    if (const char* env = std::getenv("PRIMELAB_THREADS")) {
        long n = std::atol(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Blocked parallel loop over [0, n). Tasks write to disjoint slots, so
// results do not depend on the worker count.
inline void parallel_for(uint64_t n, const std::function<void(uint64_t, uint64_t)>& body) {
    unsigned workers = std::min<uint64_t>(thread_count(), n ? n : 1);
    if (workers <= 1 || n < 2) {
        if (n) body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        uint64_t lo = w * chunk;
        uint64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

} // namespace primelab
