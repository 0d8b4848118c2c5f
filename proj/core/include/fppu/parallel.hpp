#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace fppu {

/// Split [0, total) into `workers` contiguous shards, run fn(begin, end) on
/// each (one thread per shard beyond the first) and return the shard results
/// in shard order, so any fold over them is deterministic.
template <class Fn>
auto run_sharded(std::size_t total, unsigned workers, Fn&& fn) {
  using Result = decltype(fn(std::size_t{0}, std::size_t{0}));
  workers = std::max(1u, workers);
  if (total < workers) workers = total == 0 ? 1u : static_cast<unsigned>(total);
  std::vector<Result> results(workers);
  const std::size_t chunk = (total + workers - 1) / workers;
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 1; w < workers; ++w) {
      const std::size_t begin = std::min(total, w * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      threads.emplace_back([&, w, begin, end] { results[w] = fn(begin, end); });
    }
    results[0] = fn(0, std::min(total, chunk));
  }
  return results;
}

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

}  // namespace fppu
