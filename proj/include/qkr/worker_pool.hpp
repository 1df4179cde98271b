#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qkr {

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Jobs are pulled
/// from a shared counter, so completion order varies but every index runs
/// exactly once. Returns one exception_ptr per job (null on success).
template <class Fn>
std::vector<std::exception_ptr> run_indexed(std::size_t count, int workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || count <= 1) {
        worker();
        return errors;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(std::min(threads, count));
        for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    }
    return errors;
}

}  // namespace qkr
