#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mtbound {

// Worker cap: MTBOUND_THREADS when set, else the hardware count.
inline int worker_count() {
  if (const char* env = std::getenv("MTBOUND_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0, n). Callables must write to disjoint slots; results
// are then independent of scheduling.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  std::size_t workers = static_cast<std::size_t>(worker_count());
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace mtbound
