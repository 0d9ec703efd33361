#include "oligodyn/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace oligodyn {

int thread_count() {
  if (const char* env = std::getenv("OLIGODYN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 256L));
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int plan_workers(long long n) {
  if (n <= 0) return 1;
  return static_cast<int>(std::min<long long>(thread_count(), n));
}

void parallel_for(long long n,
                  const std::function<void(int, long long, long long)>& body) {
  if (n <= 0) return;
  const int workers = plan_workers(n);
  const long long chunk = (n + workers - 1) / workers;
  if (workers <= 1) {
    body(0, 0, n);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const long long lo = static_cast<long long>(w) * chunk;
    const long long hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, w, lo, hi] {
      try {
        body(w, lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace oligodyn
