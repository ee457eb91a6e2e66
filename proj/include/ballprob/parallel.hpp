#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ballprob {

/// Worker count: BALLPROB_THREADS env var caps parallelism, 0 or unset
/// means auto (hardware concurrency).
inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("BALLPROB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
  }
  return hw;
}

/// Runs fn(i) for i in [0, n) across the thread budget. Results must be
/// written to caller-owned per-index slots; ordering of side effects beyond
/// that is unspecified.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = thread_budget();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ballprob
