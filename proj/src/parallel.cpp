#include "qflow/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace qflow {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
    const int hw = (int)std::thread::hardware_concurrency();
    g_threads = std::clamp(n, 1, std::max(1, hw > 0 ? hw : 64));
}

int thread_count() { return g_threads; }

void parallel_for(int n, const std::function<void(int, int)>& fn) {
    const int t = std::min(g_threads, n);
    if (t <= 1) {
        if (n > 0) fn(0, n);
        return;
    }
    const int chunk = (n + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    for (int k = 1; k < t; ++k) {
        const int b = k * chunk, e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back(fn, b, e);
    }
    fn(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace qflow
