#include "triphase/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace triphase {

namespace {
std::atomic<int> g_cap{1};
}

void set_thread_cap(int cap) { g_cap.store(cap < 0 ? 1 : cap); }

int thread_count() {
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int cap = g_cap.load();
  return cap == 0 ? hw : std::min(cap, hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace triphase
