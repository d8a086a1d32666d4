#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace wdens {

/// Process-wide default worker count (CLI --threads / WDENS_THREADS override).
int default_thread_count();
void set_default_thread_count(int n);

/// Runs fn(i) for i in [0, n). Work items must write to disjoint slots;
/// results are then independent of the thread count.
template <typename Fn>
void parallel_for(std::size_t n, const Fn& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace wdens
