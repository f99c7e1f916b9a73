#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace straymag {

// Raster fan-out. Thread count comes from STRAYMAG_THREADS (0 or unset means
// auto); set_thread_override takes precedence, mainly for tests. Work items
// write disjoint output slots and are internally sequential, so results do
// not depend on the schedule.

namespace detail {
inline int& thread_override() {
    static int value = -1;
    return value;
}
}  // namespace detail

inline void set_thread_override(int n) { detail::thread_override() = n; }

inline int thread_count() {
    if (detail::thread_override() >= 1) return detail::thread_override();
    int n = 0;
    if (const char* env = std::getenv("STRAYMAG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0 && v < 1024) n = static_cast<int>(v);
    }
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return n >= 1 ? n : 1;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const int threads = thread_count();
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    struct Failure {
        std::size_t index;
        std::exception_ptr error;
    };
    std::vector<Failure> failures(static_cast<std::size_t>(threads),
                                  Failure{static_cast<std::size_t>(-1), nullptr});

    const std::size_t n_workers = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w]() {
            const std::size_t lo = count * w / n_workers;
            const std::size_t hi = count * (w + 1) / n_workers;
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    fn(i);
                } catch (...) {
                    failures[w] = Failure{i, std::current_exception()};
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    // Deterministic error reporting: the failure with the lowest index wins.
    const Failure* first = nullptr;
    for (const auto& f : failures)
        if (f.error && (!first || f.index < first->index)) first = &f;
    if (first) std::rethrow_exception(first->error);
}

}  // namespace straymag
