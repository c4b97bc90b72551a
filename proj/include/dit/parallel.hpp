#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dit {

// Worker-thread cap: DIT_MAX_THREADS in the environment wins, otherwise the
// hardware concurrency.
inline unsigned max_threads() {
    static const unsigned cached = [] {
        if (const char* env = std::getenv("DIT_MAX_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? hc : 1u;
    }();
    return cached;
}

// Static-chunked parallel loop over [0, n). fn(begin, end) must only write to
// disjoint slots, which keeps results byte-identical for any thread count.
template <class Fn>
void parallel_for(size_t n, const Fn& fn) {
    const unsigned nt = static_cast<unsigned>(
        std::min<size_t>(max_threads(), n == 0 ? 1 : n));
    if (n == 0) return;
    if (nt <= 1) {
        fn(size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt - 1);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const size_t chunk = (n + nt - 1) / nt;
    auto work = [&](size_t b, size_t e) {
        try {
            fn(b, e);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    for (unsigned i = 1; i < nt; ++i) {
        const size_t b = std::min(n, chunk * i);
        const size_t e = std::min(n, chunk * (i + 1));
        if (b < e) pool.emplace_back(work, b, e);
    }
    work(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace dit
