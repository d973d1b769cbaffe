#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace mntd {

// Worker count from MNTD_WORKERS; default 1 (fully sequential code paths).
inline int env_worker_count() {
    const char* raw = std::getenv("MNTD_WORKERS");
    if (raw == nullptr) return 1;
    const int parsed = std::atoi(raw);
    return parsed >= 1 ? parsed : 1;
}

// Runs fn(i) for i in [0, count). With workers <= 1 this is a plain loop.
// Tasks must write only to their own output slots; the first exception is
// rethrown after all threads join.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t lanes = std::min<std::size_t>(workers, count);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(lanes);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
        pool.emplace_back([&, lane] {
            try {
                for (std::size_t i = lane; i < count; i += lanes) fn(i);
            } catch (...) {
                errors[lane] = std::current_exception();
            }
        });
    }
    for (auto& worker : pool) worker.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace mntd
