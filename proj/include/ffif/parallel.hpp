#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ffif {

/// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
/// handled by exactly one worker, so per-index results do not depend on the
/// worker count. workers == 0 picks the hardware concurrency.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned workers, Body&& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t chunks = std::min<std::size_t>(workers, count);
  if (chunks <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  const std::size_t per = (count + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t begin = std::min(count, c * per);
    const std::size_t end = std::min(count, begin + per);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, per));
  for (auto& t : pool) t.join();
}

}  // namespace ffif
