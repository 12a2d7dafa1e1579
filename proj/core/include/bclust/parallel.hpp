#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bclust {

/// Splits [0, count) into at most `threads` contiguous chunks and runs
/// fn(chunk, begin, end) on each. Chunk 0 runs on the calling thread. The
/// first exception thrown by any chunk is rethrown after all chunks finish.
template <class Fn>
void parallel_chunks(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads <= 1) {
    if (count > 0) fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  auto run = [&](std::size_t chunk) {
    const std::size_t begin = count * chunk / threads;
    const std::size_t end = count * (chunk + 1) / threads;
    try {
      fn(chunk, begin, end);
    } catch (...) {
      errors[chunk] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads - 1);
    for (std::size_t c = 1; c < threads; ++c) workers.emplace_back(run, c);
    run(0);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bclust
