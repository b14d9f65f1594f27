#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace sumhess {

/// Fixed-order pairwise sum; deterministic for a given input order.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// Static-partition parallel loop over [0, count). Each index writes only its
/// own outputs, so results are independent of the thread count.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& body,
                         unsigned threads = 0) {
    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    if (threads == 1 || count < 2 * threads) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace sumhess
