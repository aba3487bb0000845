#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qic {

/// Resolve a thread-count request: values >= 1 are taken as-is, anything
/// else means "use the hardware concurrency".
inline int effective_threads(int requested) {
    if (requested >= 1) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; fn must only touch state owned by its index, so
/// results are identical regardless of thread count. The first exception
/// thrown by any worker is rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& fn) {
    threads = effective_threads(threads);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace qic
