#include "fdqpt/grids.hpp"

#include <algorithm>
#include <thread>

namespace fdqpt {

std::vector<double> brillouin_k_grid(int k_count) {
    return uniform_grid(-k_pi, k_pi, k_count, 0.5);
}

std::vector<double> uniform_grid(double a, double b, int n, double offset) {
    std::vector<double> g(static_cast<std::size_t>(n > 0 ? n : 0));
    const double step = (b - a) / static_cast<double>(n);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = a + (static_cast<double>(i) + offset) * step;
    }
    return g;
}

double pairwise_sum(const double* v, std::size_t count, std::size_t stride) {
    if (count <= 8) {
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) acc += v[i * stride];
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(v, half, stride) + pairwise_sum(v + half * stride, count - half, stride);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers = std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, 16);
    workers = std::min(workers, n);
    if (workers <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fdqpt
