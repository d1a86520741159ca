#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace l2lab {

inline int default_workers() {
    if (const char* env = std::getenv("L2LAB_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Runs fn(0..n-1) on up to `workers` threads; results come back indexed, so
// downstream merges are order-independent of scheduling.
template <class T>
std::vector<T> parallel_map(int n, int workers, const std::function<T(int)>& fn) {
    std::vector<T> out(n);
    if (n == 0) return out;
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) out[i] = fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace l2lab
