#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace klsign {

inline unsigned default_threads()
{
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

// Runs fn(task) for task in [0, n_tasks) on up to `threads` workers.
// Tasks are claimed dynamically; callers that need a deterministic result
// write into per-task slots and reduce them in task order afterwards.
template <class Fn>
void parallel_for(std::size_t n_tasks, unsigned threads, Fn&& fn)
{
    if (n_tasks == 0)
        return;
    unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_tasks)));
    if (workers == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t)
            fn(t);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1))
                        fn(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(n_tasks);
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace klsign
