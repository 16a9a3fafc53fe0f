#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace qenergy {

inline std::size_t default_workers() {
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Evaluates fn(i) for i in [0, n) on up to `workers` threads. Results are stored by
// index, so the output never depends on scheduling.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn, std::size_t workers = default_workers()) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<std::optional<R>> slots(n);
    auto unwrap = [&] {
        std::vector<R> out;
        out.reserve(n);
        for (auto& s : slots) out.push_back(std::move(*s));
        return out;
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
        return unwrap();
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return unwrap();
}

}  // namespace qenergy
