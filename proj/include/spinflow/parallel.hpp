#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace spinflow {

/// Runs fn(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Tasks must write to disjoint slots; the result layout is
/// then schedule-independent.
template <typename Fn>
void parallel_for_index(std::size_t count, int workers, Fn&& fn) {
    if (count == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t n_threads = workers > 0 ? static_cast<std::size_t>(workers)
                                        : static_cast<std::size_t>(hw ? hw : 1);
    if (n_threads > count) n_threads = count;
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace spinflow
