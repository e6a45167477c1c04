#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace tokstat {

// Worker count used when the caller passes 0.
inline std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Splits items into at most `workers` contiguous chunks, runs fn on each chunk
// (one thread per chunk) and returns the per-chunk results in chunk order.
// Results depend only on the chunk contents, so callers that merge with a
// commutative, associative operation get output independent of `workers`.
template <typename T, typename Fn>
auto map_chunks(std::span<const T> items, std::size_t workers, Fn fn)
    -> std::vector<decltype(fn(items))> {
  using Result = decltype(fn(items));
  if (workers == 0) workers = default_workers();
  workers = std::max<std::size_t>(1, std::min(workers, items.size()));

  std::vector<Result> results(workers);
  if (workers == 1) {
    results[0] = fn(items);
    return results;
  }
  const std::size_t base = items.size() / workers;
  const std::size_t extra = items.size() % workers;
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  std::size_t offset = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    auto chunk = items.subspan(offset, len);
    offset += len;
    threads.emplace_back([&results, &errors, &fn, chunk, w] {
      try {
        results[w] = fn(chunk);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  threads.clear();  // join
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace tokstat
