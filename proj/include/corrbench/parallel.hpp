#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace corrbench {

// Runs fn(block) for every block in [0, nblocks). Work is handed out
// dynamically, but each block writes only to its own caller-owned slot and
// merges happen sequentially afterwards, so results never depend on the
// worker count.
inline void run_blocks(std::size_t nblocks, int workers,
                       const std::function<void(std::size_t)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            try {
                fn(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int count = static_cast<int>(std::min<std::size_t>(workers, nblocks));
    pool.reserve(count);
    for (int w = 0; w < count; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace corrbench
