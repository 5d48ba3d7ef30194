#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fdqpt {

inline constexpr double k_pi = 3.14159265358979323846;

// Uniform N-point quasimomentum grid on [-pi, pi), offset by half a spacing:
// k_i = -pi + (i + 1/2) 2 pi / N.  The offset keeps the symmetry points
// 0, +/-pi/2, -pi (where band touchings and degenerate denominators live)
// off the grid.
std::vector<double> brillouin_k_grid(int k_count);

// Uniform half-open grid: a + (i + offset) * (b - a) / n, i = 0..n-1.
std::vector<double> uniform_grid(double a, double b, int n, double offset = 0.0);

// Deterministic pairwise (cascade) summation of v[begin:end) with stride.
double pairwise_sum(const double* v, std::size_t count, std::size_t stride = 1);

// Run fn(begin, end) over a partition of [0, n) on a bounded thread pool.
// Chunks are contiguous and the workers write to disjoint slots only, so the
// result is identical to the serial execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fdqpt
