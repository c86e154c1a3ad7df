#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace toruslab {

// Parallelism cap: TORUSLAB_THREADS wins, then hardware concurrency.
inline unsigned max_threads() {
  if (const char* env = std::getenv("TORUSLAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Chunked parallel loop over [0, count). Runs inline when one thread suffices.
template <class Fn>
inline void parallel_for(std::size_t count, Fn&& fn) {
  unsigned threads = std::min<std::size_t>(max_threads(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace toruslab
