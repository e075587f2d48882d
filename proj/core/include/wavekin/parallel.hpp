#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace wavekin {

/// Deterministic chunked map-reduce. Items are split into fixed-size chunks
/// whose boundaries do not depend on the thread count; workers claim chunks
/// through an atomic cursor and the partial results are merged left to right
/// on the calling thread. The result is therefore bit-identical for any
/// number of threads.
///
/// map(begin, end) -> R for one chunk; merge(R&, R&&) folds the next chunk in.
template <class R, class Map, class Merge>
R chunked_reduce(std::size_t items, std::size_t chunk_size, unsigned threads, Map&& map,
                 Merge&& merge) {
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t chunks = items == 0 ? 0 : (items + chunk_size - 1) / chunk_size;
  std::vector<std::optional<R>> parts(chunks);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(items, begin + chunk_size);
    try {
      parts[c].emplace(map(begin, end));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  unsigned workers = threads == 0 ? 1 : threads;
  if (workers <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t c = cursor.fetch_add(1);
          if (c >= chunks) return;
          run_chunk(c);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  // first failing chunk wins, independent of scheduling
  for (std::size_t c = 0; c < chunks; ++c) {
    if (errors[c]) std::rethrow_exception(errors[c]);
  }

  R result{};
  bool first = true;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (first) {
      result = std::move(*parts[c]);
      first = false;
    } else {
      merge(result, std::move(*parts[c]));
    }
  }
  return result;
}

}  // namespace wavekin
