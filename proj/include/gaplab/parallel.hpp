// Copyright (c) 2026 The gaplab authors
// SPDX-License-Identifier: MIT
//
// Replication-level parallelism: a thread budget read once from the
// environment and a work loop that hands out replication indices atomically.
// Callers store results by replication index, so output is independent of
// how indices land on workers.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gaplab {

inline int thread_budget() {
    if (const char* env = std::getenv("GAPLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 4096)
            throw std::domain_error("GAPLAB_THREADS must be an integer in [1, 4096]");
        return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename F>
void parallel_for_reps(std::size_t n_reps, F&& fn, int threads = -1) {
    if (threads < 0) threads = thread_budget();
    if (threads <= 1 || n_reps < 2) {
        for (std::size_t rep = 0; rep < n_reps; ++rep) fn(rep);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            std::size_t rep = next.fetch_add(1, std::memory_order_relaxed);
            if (rep >= n_reps) return;
            try {
                fn(rep);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n_reps);
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace gaplab
