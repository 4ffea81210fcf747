#pragma once

// Deterministic parallel map and reductions.
//
// Every reduction in the library goes through pairwise_sum or
// deterministic_argmax over a buffer indexed by task id, so the result never
// depends on how tasks were scheduled across threads.

#include <algorithm>
#include <atomic>
#include <exception>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace oscillab {

namespace detail {
inline std::atomic<unsigned>& thread_setting()
{
    static std::atomic<unsigned> value{0};  // 0 = auto
    return value;
}
}  // namespace detail

/// Thread count used by parallel_map. 0 selects hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_setting().store(n); }

inline unsigned thread_count()
{
    unsigned n = detail::thread_setting().load();
    if (n == 0) {
        n = std::thread::hardware_concurrency();
    }
    return std::max(1u, n);
}

/// Applies OSCILLAB_THREADS if set ("auto" or a positive integer).
inline void configure_threads_from_env()
{
    const char* env = std::getenv("OSCILLAB_THREADS");
    if (env == nullptr) {
        return;
    }
    std::string s(env);
    if (s == "auto" || s.empty()) {
        set_thread_count(0);
        return;
    }
    const long n = std::strtol(s.c_str(), nullptr, 10);
    if (n > 0) {
        set_thread_count(static_cast<unsigned>(n));
    }
}

/// Calls fn(i) for i in [0, count), split in contiguous blocks across threads.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(count, lo + block);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([lo, hi, &fn, &err = errors[w]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    fn(i);
                }
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    pool.clear();  // join
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// out[i] = fn(i), computed in parallel.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn)
{
    std::vector<T> out(count);
    parallel_for(count, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

/// Pairwise (tree) summation with a tree fixed by index.
inline double pairwise_sum(std::span<const double> xs)
{
    constexpr std::size_t leaf = 16;
    if (xs.size() <= leaf) {
        double s = 0.0;
        for (double x : xs) {
            s += x;
        }
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Index of the largest entry; ties go to the smallest index.
inline std::size_t deterministic_argmax(std::span<const double> xs)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] > xs[best]) {
            best = i;
        }
    }
    return best;
}

/// Parallel map followed by a pairwise sum of the per-index results.
template <typename Fn>
double parallel_sum(std::size_t count, Fn&& fn)
{
    const auto parts = parallel_map<double>(count, std::forward<Fn>(fn));
    return pairwise_sum(parts);
}

}  // namespace oscillab
