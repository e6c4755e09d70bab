#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace riplab {

/// Runs fn(i) for every i in [0, count) across `workers` threads.
///
/// Each index is handled exactly once; tasks must write only to their own
/// per-index slots so results cannot depend on the worker count.  The first
/// exception thrown by a task is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t count, int workers, F&& fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count || failed.load(std::memory_order_relaxed)) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

/// Fixed block size used by deterministic Monte Carlo accumulations: partial
/// sums are produced per block and combined in block order, so floating-point
/// results are identical at any worker count.
inline constexpr std::size_t kAccumulationBlock = 4096;

inline std::size_t block_count(std::size_t total) {
  return (total + kAccumulationBlock - 1) / kAccumulationBlock;
}

struct BlockRange {
  std::size_t begin;
  std::size_t end;
};

inline BlockRange block_range(std::size_t block, std::size_t total) {
  const std::size_t begin = block * kAccumulationBlock;
  return {begin, std::min(begin + kAccumulationBlock, total)};
}

}  // namespace riplab
