#pragma once
// Deterministic fan-out: apply `fn` to every element of `items` on up to
// `jobs` threads and return results in input order. The first exception is
// rethrown on the calling thread once all workers have stopped.

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ragkit::util {

template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, int jobs, Fn&& fn)
    -> std::vector<decltype(fn(items[0]))> {
    using R = decltype(fn(items[0]));
    std::vector<R> results(items.size());
    if (items.empty()) return results;
    if (jobs < 1) jobs = 1;
    std::size_t workers = std::min<std::size_t>(std::size_t(jobs), items.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
        return results;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= items.size()) return;
                try {
                    results[i] = fn(items[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    cursor.store(items.size());
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace ragkit::util
