#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "fermsea/types.hpp"

namespace fermsea {

/// FERMSEA_THREADS environment variable, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("FERMSEA_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs f(i) for i in [0, n). Work items must be independent; results should
/// be written to preassigned slots so the output does not depend on the
/// schedule. The first exception thrown by a worker is rethrown.
template <class F>
void parallel_for(Index n, int threads, F&& f) {
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<Index>(threads, std::max<Index>(n, 1)));
  if (threads <= 1 || n <= 1) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<Index> next{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        Index i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fermsea
