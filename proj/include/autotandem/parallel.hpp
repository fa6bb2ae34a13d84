#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace autotandem {

inline unsigned default_thread_count() {
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

/// Run fn(0..n-1) across up to `threads` workers (0 = hardware count).
/// Tasks must be independent; the first uncaught exception is rethrown
/// after all workers join.
inline void parallel_for(int n, unsigned threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (threads == 0) threads = default_thread_count();
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace autotandem
