#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wrinkle {

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Work items must
// write to disjoint outputs. The first exception thrown (lowest index wins
// among those observed) is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < std::min(workers, count); ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wrinkle
