#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace crgg {

/// 0 means "use the hardware count".
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs body(begin, end, worker) over a static contiguous partition of [0, count).
/// Outputs written by index stay identical for every thread count; reductions
/// belong after the join, in index order.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t, std::size_t, unsigned)>& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    if (count > 0) body(0, count, 0);
    return;
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = count * w / threads;
    const std::size_t end = count * (w + 1) / threads;
    pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace crgg
