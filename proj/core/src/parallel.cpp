#include "ramified/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ramified {

std::size_t thread_count(std::size_t requested) {
  std::size_t n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("RT_THREADS")) {
    try {
      const long v = std::stol(cap);
      if (v >= 1) n = std::min(n, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      // Unparseable caps are ignored.
    }
  }
  return n;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::min(std::max<std::size_t>(threads, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_index = n;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ramified
