#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rrrp {

// Worker count: RRRP_THREADS if set (>=1), else hardware concurrency.
inline int effective_threads() {
  if (const char* env = std::getenv("RRRP_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(begin, end) over disjoint chunks of [0, n).  Chunking is a pure
// function of n and the worker count, so any per-index work seeded by index
// stays deterministic.
inline void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t)>& fn) {
  int workers = effective_threads();
  if (workers <= 1 || n < 2048) {
    fn(0, n);
    return;
  }
  int64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (int64_t b = 0; b < n; b += chunk) {
    int64_t e = std::min(n, b + chunk);
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace rrrp
