#pragma once

#include <cstddef>
#include <functional>

namespace sgls {

/// Caps the number of worker threads used by the numerical kernels.
/// Zero restores the default (hardware concurrency).
void set_thread_limit(unsigned threads) noexcept;
unsigned thread_limit() noexcept;

/// Runs body(begin, end) over [0, count) split into contiguous blocks.
/// Blocks never overlap, so bodies that only write their own slots are race free.
void parallel_for(std::size_t count, std::size_t min_block,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sgls
