#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qlb {

inline int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static block partition of [0, n); f(begin, end) runs on each block.  The
// partition depends only on n and n_workers, so results assembled per index
// are deterministic.
inline void parallel_for(std::size_t n, int n_workers,
                         const std::function<void(std::size_t, std::size_t)>& f) {
  if (n == 0) return;
  if (n_workers <= 1 || n == 1) {
    f(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(n_workers, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qlb
