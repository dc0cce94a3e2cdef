#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace wenc {

// Splits [0, n) into contiguous slabs, one per worker.  With one worker the
// callable runs on the calling thread.  Each index is visited exactly once.
inline void parallel_slabs(long n, int threads, const std::function<void(long, long)>& fn) {
    if (threads <= 1 || n < 2) {
        fn(0, n);
        return;
    }
    int nw = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    long chunk = (n + nw - 1) / nw;
    for (int w = 1; w < nw; ++w) {
        long lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    fn(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

// Reduction with a summation order independent of the worker count: partial
// sums are produced per index and combined sequentially.
inline double parallel_plane_sum(long n, int threads, const std::function<double(long)>& plane_fn) {
    std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
    parallel_slabs(n, threads, [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) partial[static_cast<std::size_t>(i)] = plane_fn(i);
    });
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

} // namespace wenc
