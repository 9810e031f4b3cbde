#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace aoilab {

// Worker cap from the AOI_LAB_THREADS environment variable; 0 when unset.
int env_thread_cap();

// Runs body(i) for i in [0, count). Work items must be independent; the result
// may not depend on the schedule. parallelism <= 1 runs inline.
inline void parallel_for(std::size_t count, int parallelism, const std::function<void(std::size_t)>& body) {
    const int cap = env_thread_cap();
    int workers = parallelism;
    if (cap > 0 && workers > cap) workers = cap;
    if (workers > static_cast<int>(count)) workers = static_cast<int>(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace aoilab
