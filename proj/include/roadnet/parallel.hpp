#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace roadnet::parallel {

// Work is always cut into blocks of this many items, whatever the worker
// count. Per-block partial results are combined in block order, so every
// reduction is bit-identical for any number of workers.
inline constexpr std::size_t kBlockSize = std::size_t{1} << 14;

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

inline unsigned hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1u : n;
}

// Process-wide worker count used when an operation is given threads == 0.
inline unsigned default_thread_count() {
  unsigned n = detail::thread_setting().load(std::memory_order_relaxed);
  return n == 0 ? hardware_threads() : n;
}

inline void set_default_thread_count(unsigned n) {
  detail::thread_setting().store(n, std::memory_order_relaxed);
}

inline unsigned resolve_threads(unsigned requested) {
  return requested == 0 ? default_thread_count() : requested;
}

inline std::size_t block_count(std::size_t n, std::size_t block = kBlockSize) {
  return (n + block - 1) / block;
}

// Calls fn(block_index, begin, end) for every block of [0, n). Blocks are
// dealt round-robin to workers; with one worker (or one block) everything
// runs on the calling thread.
template <typename Fn>
void for_each_block(std::size_t n, unsigned threads, Fn&& fn, std::size_t block = kBlockSize) {
  const std::size_t blocks = block_count(n, block);
  const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      fn(b, b * block, std::min(n, (b + 1) * block));
    }
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < blocks; b += workers) {
          fn(b, b * block, std::min(n, (b + 1) * block));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Deterministic sum of fn(i) over [0, n).
template <typename Fn>
double blocked_sum(std::size_t n, unsigned threads, Fn&& fn) {
  std::vector<double> partial(block_count(n), 0.0);
  for_each_block(n, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += fn(i);
    partial[b] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace roadnet::parallel
