#include "gridflow/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gridflow {

int worker_limit() {
    static const int limit = [] {
        const char* env = std::getenv("GRIDFLOW_THREADS");
        if (!env) return 1;
        const int parsed = std::atoi(env);
        if (parsed < 1) return 1;
        const int hw = int(std::thread::hardware_concurrency());
        return hw > 0 ? std::min(parsed, hw) : parsed;
    }();
    return limit;
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(worker_limit(), n == 0 ? 1 : n);
    if (workers <= 1 || n < 1024) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gridflow
