#include "sgls/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sgls {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned threads) noexcept { g_thread_limit.store(threads); }

unsigned thread_limit() noexcept {
  const unsigned limit = g_thread_limit.load();
  if (limit != 0) return limit;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t min_block,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  min_block = std::max<std::size_t>(min_block, 1);
  const std::size_t max_workers = (count + min_block - 1) / min_block;
  const std::size_t workers = std::min<std::size_t>(thread_limit(), max_workers);
  if (workers <= 1) {
    body(0, count);
    return;
  }
  const std::size_t block = (count + workers - 1) / workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](std::size_t begin, std::size_t end) {
    try {
      body(begin, end);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(count, begin + block);
      if (begin >= end) break;
      pool.emplace_back([&guarded, begin, end] { guarded(begin, end); });
    }
    guarded(0, std::min(count, block));
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sgls
