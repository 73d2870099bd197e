#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sqrtsum {

/// Runs fn(0) .. fn(block_count-1) on up to `threads` workers.
///
/// Blocks are claimed from a shared counter, so the assignment of blocks to
/// threads is nondeterministic; callers keep determinism by writing each
/// block's result into its own slot and combining in block order afterwards.
/// The first exception thrown by any block is rethrown on the caller.
inline void parallel_blocks(std::int64_t block_count, int threads,
                            const std::function<void(std::int64_t)>& fn) {
  if (block_count <= 0) {
    return;
  }
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(block_count)));
  if (workers == 1) {
    for (std::int64_t b = 0; b < block_count; ++b) {
      fn(b);
    }
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t b = next.fetch_add(1);
        if (b >= block_count || failed.load()) {
          return;
        }
        try {
          fn(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

/// Default worker count: the SQRTSUM_THREADS environment variable when set,
/// otherwise the hardware concurrency.
int default_parallelism();

}  // namespace sqrtsum
