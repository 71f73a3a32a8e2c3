#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace specavg {

/// Pairwise (tree) summation. The reduction order depends only on the size
/// of the input, never on thread scheduling, so parallel producers that
/// write into index-addressed slots stay bit-reproducible.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Run fn(i) for i in [0, n_tasks) on up to n_threads worker threads.
/// Tasks are claimed from a shared counter; each task must write only to
/// its own output slot.
inline void parallel_for(int n_tasks, int n_threads, const std::function<void(int)>& fn) {
    if (n_tasks <= 0) return;
    if (n_threads <= 1 || n_tasks == 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks) break;
            fn(i);
        }
    };
    const int workers = std::min(n_threads, n_tasks);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

} // namespace specavg
