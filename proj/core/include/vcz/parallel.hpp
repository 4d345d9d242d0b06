#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace vcz {

/// Worker count: `requested` when positive, else VOLTERRA_CZ_JOBS, else 1.
inline int resolve_jobs(int requested)
{
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("VOLTERRA_CZ_JOBS")) {
        try {
            const int jobs = std::stoi(env);
            if (jobs > 0) {
                return jobs;
            }
        } catch (const std::exception&) {
        }
    }
    return 1;
}

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. Work is handed out by index, and
/// callers write results into per-index slots, so reductions over the slots are independent
/// of the worker count. The first exception thrown by fn is rethrown.
template <class Fn>
void parallel_for(std::int64_t count, int jobs, Fn&& fn)
{
    const auto workers = static_cast<std::int64_t>(std::max(1, jobs));
    if (workers == 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::int64_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::thread> threads;
    for (std::int64_t w = 1; w < std::min(workers, count); ++w) {
        threads.emplace_back(work);
    }
    work();
    for (auto& thread : threads) {
        thread.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace vcz
