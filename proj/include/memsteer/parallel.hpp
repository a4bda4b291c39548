#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace memsteer {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once and callers write only to slot i, so results do not
// depend on scheduling. The exception from the lowest failing index is
// rethrown, which keeps error reporting deterministic as well.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_index = count;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace memsteer
