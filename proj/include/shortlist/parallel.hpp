#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace shortlist {

/// Worker count: hardware concurrency capped by the
/// SHORTLIST_STRAT_THREADS environment variable when set.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SHORTLIST_STRAT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end && *end == '\0' && cap > 0 && static_cast<unsigned long>(cap) < n)
      n = static_cast<unsigned>(cap);
  }
  return n;
}

/// Runs fn(i) for i in [0, n) on a small worker pool. fn must be safe to
/// call concurrently for distinct indices; exceptions escape through the
/// first failing index.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_error{n};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
          std::size_t expected = first_error.load();
          while (i < expected && !first_error.compare_exchange_weak(expected, i)) {
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  const std::size_t bad = first_error.load();
  if (bad < n) std::rethrow_exception(errors[bad]);
}

}  // namespace shortlist
