#include "levy/parallel.hpp"

#include <atomic>

namespace levy {

namespace {
std::atomic<unsigned> g_threads{0};

unsigned resolve_threads() {
  unsigned n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("LEVY_PASSAGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}
}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n); }

unsigned thread_count() { return resolve_threads(); }

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& run_range) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(resolve_threads(), n);
  if (workers <= 1) {
    run_range(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &run_range] { run_range(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace levy
