#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace modalshift {

/// Runs fn(0), ..., fn(count-1) across up to `parallelism` worker threads.
/// Workers claim indices from a shared counter, so the interleaving varies;
/// callers must store results into per-index slots, which keeps the overall
/// outcome independent of scheduling. The first exception raised by any
/// task is rethrown here after every worker has stopped.
inline void parallel_for(std::size_t count, int parallelism,
                         const std::function<void(std::size_t)>& fn) {
    if (count == 0)
        return;
    const std::size_t workers =
        std::min<std::size_t>(parallelism < 1 ? 1 : static_cast<std::size_t>(parallelism),
                              count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::size_t index = next.fetch_add(1, std::memory_order_relaxed);
            if (index >= count)
                return;
            try {
                fn(index);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back(worker);
    for (std::thread& thread : threads)
        thread.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace modalshift
