#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace bcpnn {

// Static block partition of [0, n). Each worker gets a contiguous range,
// so results are bit-identical for any thread count as long as the body
// never reduces across ranges. threads <= 1 runs inline.
template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& body) {
    if (threads <= 1 || n <= 1) {
        body(size_t{0}, n);
        return;
    }
    size_t nthreads = std::min<size_t>(static_cast<size_t>(threads), n);
    size_t chunk = (n + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
        size_t begin = t * chunk;
        size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&body, begin, end] { body(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace bcpnn
