#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace tandem {

/// Runs fn(i) for all i in [0, n). With threads > 1 the index range is split
/// into contiguous chunks, one per worker. Tasks must be independent and
/// write to disjoint locations; under that contract the result is identical
/// for every thread count.
template <typename Fn>
void parallelFor(int threads, std::size_t n, Fn&& fn) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tandem
