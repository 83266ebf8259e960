#pragma once
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qflow {

/// Deterministic summation: values are accumulated serially inside fixed
/// 1024-element blocks, then the block partials are folded by a pairwise
/// tree. The reduction shape depends only on n, so the result is bitwise
/// reproducible for any thread count (blocks are independent).
template <class F>
double deterministic_sum_indexed(std::size_t n, F&& f) {
  constexpr std::size_t kBlock = 1024;
  if (n == 0) return 0.0;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[b] = s;
  }
  std::size_t m = nblocks;
  while (m > 1) {
    std::size_t half = m / 2;
    for (std::size_t i = 0; i < half; ++i) partial[i] = partial[2 * i] + partial[2 * i + 1];
    if (m % 2) {
      partial[half] = partial[m - 1];
      ++half;
    }
    m = half;
  }
  return partial[0];
}

inline double deterministic_sum(const double* x, std::size_t n) {
  return deterministic_sum_indexed(n, [x](std::size_t i) { return x[i]; });
}

}  // namespace qflow
