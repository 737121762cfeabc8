#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nslab::kernels {

/// Execution policy for the data-parallel kernels. Every hot loop in the
/// library routes through these helpers so that the serial reference path
/// and the OpenMP path share one implementation and produce bit-identical
/// results (reductions use a fixed blocked order independent of thread
/// count).
enum class Exec { serial, parallel };

/// Thread budget: min(omp_get_max_threads(), BESOV_NS_THREADS env var).
int thread_cap();

/// Default policy used throughout the library (parallel unless the
/// environment forces one thread).
Exec default_exec();

inline constexpr std::size_t reduction_block = 4096;

template <class F>
void for_each_index(std::size_t n, F&& f, Exec ex = default_exec()) {
#ifdef _OPENMP
  if (ex == Exec::parallel && n > 1) {
    const int nt = thread_cap();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)ex;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

namespace detail {

// Blocked reduction: per-block partials are accumulated serially in index
// order, then combined serially in block order. The arithmetic order is
// therefore independent of the thread count.
template <class T, class F>
T blocked_reduce_sum(std::size_t n, F&& term, Exec ex) {
  const std::size_t nb = (n + reduction_block - 1) / reduction_block;
  if (nb <= 1) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += term(i);
    return acc;
  }
  std::vector<T> partial(nb, T{});
  for_each_index(
      nb,
      [&](std::size_t b) {
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[b] = acc;
      },
      ex);
  T acc{};
  for (std::size_t b = 0; b < nb; ++b) acc += partial[b];
  return acc;
}

}  // namespace detail

/// Deterministic sum of term(i) over i in [0, n).
template <class F>
double sum_indexed(std::size_t n, F&& term, Exec ex = default_exec()) {
  return detail::blocked_reduce_sum<double>(n, term, ex);
}

template <class F>
std::complex<double> csum_indexed(std::size_t n, F&& term,
                                  Exec ex = default_exec()) {
  return detail::blocked_reduce_sum<std::complex<double>>(n, term, ex);
}

/// Max of term(i); order-insensitive but implemented with the same blocked
/// structure for symmetry with the sums.
template <class F>
double max_indexed(std::size_t n, F&& term, Exec ex = default_exec()) {
  const std::size_t nb = (n + reduction_block - 1) / reduction_block;
  if (n == 0) return 0.0;
  std::vector<double> partial(nb, -1.0 / 0.0);
  for_each_index(
      nb,
      [&](std::size_t b) {
        const std::size_t lo = b * reduction_block;
        const std::size_t hi = std::min(n, lo + reduction_block);
        double m = -1.0 / 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, term(i));
        partial[b] = m;
      },
      ex);
  double m = partial[0];
  for (std::size_t b = 1; b < nb; ++b) m = std::max(m, partial[b]);
  return m;
}

}  // namespace nslab::kernels
