#pragma once

#include <future>
#include <thread>
#include <vector>

namespace se2diff::detail {

/// Partitions [begin, end) into contiguous chunks and runs f(lo, hi) on each,
/// one per worker. Workers never touch the same output range, so the result
/// is identical to the serial loop regardless of thread count.
template <typename F>
void parallel_for(int begin, int end, F&& f, size_t work_per_item = 1) {
    const int n = end - begin;
    if (n <= 0) return;

    unsigned hw = std::thread::hardware_concurrency();
    const size_t total_work = static_cast<size_t>(n) * work_per_item;
    // Not worth spawning below ~64k units of work.
    if (hw < 2 || n < 2 || total_work < 65536) {
        f(begin, end);
        return;
    }

    const int chunks = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
    std::vector<std::future<void>> futures;
    futures.reserve(chunks - 1);
    int lo = begin;
    for (int c = 0; c < chunks; ++c) {
        const int hi = begin + static_cast<int>(static_cast<long long>(n) * (c + 1) / chunks);
        if (c + 1 == chunks) {
            f(lo, hi);
        } else {
            futures.push_back(std::async(std::launch::async, [&f, lo, hi] { f(lo, hi); }));
        }
        lo = hi;
    }
    for (auto& fut : futures) fut.get();
}

}  // namespace se2diff::detail
