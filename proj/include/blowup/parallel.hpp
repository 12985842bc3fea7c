// Small helpers for deterministic fan-out over independent work items.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace blowup {

/// Independent generator for work item `index`, so results do not depend on
/// how items are split across workers.
inline std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Calls body(begin, end, chunk) over `workers` contiguous chunks of [0, count).
/// Chunk c always covers the same range for a given (count, workers).
template <class Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        body(std::size_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned c = 0; c < workers; ++c) {
        const std::size_t begin = count * c / workers;
        const std::size_t end = count * (c + 1) / workers;
        pool.emplace_back([&body, begin, end, c] { body(begin, end, c); });
    }
    for (auto& t : pool) t.join();
}

/// Worker count from BLOWUP_LAB_WORKERS, falling back to hardware concurrency.
inline unsigned default_workers() {
    if (const char* env = std::getenv("BLOWUP_LAB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace blowup
