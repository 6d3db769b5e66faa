#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace beliaev {

// Runs fn(i) for i in [0, n), striped over `threads` workers.  Callers write
// results into preallocated slots indexed by i, so the output is identical
// for any thread count; only wall time changes.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nw = static_cast<std::size_t>(threads);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += nw) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace beliaev
