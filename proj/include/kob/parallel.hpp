#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace kob {

// Runs body(rep) for rep in [0, reps) on up to `threads` workers with a static
// block partition. Each replicate must write only to its own slot; combined
// with one RNG substream per replicate this makes results independent of the
// thread count. The first exception thrown by any body is rethrown here.
inline void parallel_replicates(long reps, int threads,
                                const std::function<void(long)>& body) {
    if (reps <= 0) return;
    if (threads < 1) threads = 1;
    if (threads == 1 || reps == 1) {
        for (long r = 0; r < reps; ++r) body(r);
        return;
    }
    const long nworkers = std::min<long>(threads, reps);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nworkers));
    const long chunk = (reps + nworkers - 1) / nworkers;
    for (long w = 0; w < nworkers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(reps, lo + chunk);
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (long r = lo; r < hi; ++r) body(r);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace kob
