#pragma once

// Deterministic chunked parallel map: work is split into fixed-size chunks by
// index, chunks may run on any thread, and results are combined in chunk
// order, so output is independent of the worker count.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace poincare::par {

template <class ChunkFn>
void chunked_parallel(std::size_t n, std::size_t chunk_size, unsigned workers, ChunkFn&& fn) {
  if (n == 0) return;
  const std::size_t n_chunks = (n + chunk_size - 1) / chunk_size;
  if (workers <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

} // namespace poincare::par
