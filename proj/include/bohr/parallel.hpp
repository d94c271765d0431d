#pragma once

#include <array>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bohr::par {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Deterministic parallel reduction over i in [0, n): the range is cut into
// fixed-size chunks, each chunk is summed serially with Kahan compensation,
// and chunk subtotals are combined in index order. The result is bitwise
// identical for every thread count, including 1, which is the contract the
// serial reference implementations are tested against.
//
// eval(i, out) writes K values for point i into out[0..K). The same
// closure object is invoked from every worker thread, so eval must keep
// its scratch state on the stack of the call.
template <std::size_t K, class Eval>
std::array<double, K> chunked_accumulate(std::int64_t n, bool parallel, Eval&& eval) {
  constexpr std::int64_t kChunk = 4096;
  std::array<double, K> total{};
  if (n <= 0) return total;

  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::array<double, K>> partial(static_cast<std::size_t>(nchunks));

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && nchunks > 1)
#else
  (void)parallel;
#endif
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * kChunk;
    const std::int64_t hi = std::min(n, lo + kChunk);
    std::array<double, K> sum{};
    std::array<double, K> comp{};
    std::array<double, K> out{};
    for (std::int64_t i = lo; i < hi; ++i) {
      eval(i, out.data());
      for (std::size_t k = 0; k < K; ++k) {
        const double y = out[k] - comp[k];
        const double t = sum[k] + y;
        comp[k] = (t - sum[k]) - y;
        sum[k] = t;
      }
    }
    partial[static_cast<std::size_t>(c)] = sum;
  }

  std::array<double, K> comp{};
  for (const auto& s : partial) {
    for (std::size_t k = 0; k < K; ++k) {
      const double y = s[k] - comp[k];
      const double t = total[k] + y;
      comp[k] = (t - total[k]) - y;
      total[k] = t;
    }
  }
  return total;
}

// Serial Kahan sum in index order; the reference path used in tests.
template <class Eval>
double kahan_sum(std::int64_t n, Eval&& eval) {
  double sum = 0.0, comp = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double y = eval(i) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace bohr::par
