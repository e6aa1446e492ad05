#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

// Batch kernels: an OpenMP-parallel indexed map plus a serial reference twin.
// Every call site writes results into per-index slots, so outputs are ordered
// by index and identical under any thread count; the serial twin exists so
// tests can assert that bit-for-bit and benchmarks can measure the speedup.

namespace softarm {

template <typename F>
void serial_for_indexed(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <typename F>
void parallel_for_indexed(std::size_t n, int threads, F&& f) {
#ifdef _OPENMP
  if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
  }
#else
  (void)threads;
  serial_for_indexed(n, f);
#endif
}

}  // namespace softarm
