#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace adn {

/// Runs fn(0..count-1) across up to `jobs` threads. Tasks are independent
/// runs with no cross-task communication; results must be written to
/// task-indexed slots so merging is order-independent. The first exception
/// (lowest task index) is rethrown after all threads join.
inline void run_parallel(std::size_t jobs, std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (jobs == 0) jobs = 1;
  jobs = std::min(jobs, count);
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

inline std::size_t default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace adn
