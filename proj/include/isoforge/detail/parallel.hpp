#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace isoforge::detail {

inline unsigned default_jobs()
{
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Order-preserving parallel map. The first exception thrown by any worker is
/// rethrown after all workers stop.
template <class T, class F>
auto parallel_map(const std::vector<T> &in, F f, unsigned jobs = 0)
    -> std::vector<std::invoke_result_t<F &, const T &>>
{
    using R = std::invoke_result_t<F &, const T &>;
    if (jobs == 0)
        jobs = default_jobs();
    std::vector<std::optional<R>> slots(in.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= in.size() || failed.load())
                return;
            try {
                slots[i].emplace(f(in[i]));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t n_threads = std::min<std::size_t>(jobs, in.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_threads; ++t)
            threads.emplace_back(worker);
        for (auto &th : threads)
            th.join();
    }
    if (error)
        std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(in.size());
    for (auto &s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace isoforge::detail
