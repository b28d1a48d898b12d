#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace spinrc {

// Splits [0, count) into contiguous chunks, one per worker. Each index is
// processed by exactly one worker and results are written to disjoint
// locations by the caller, so output is independent of the thread count.
template <typename Worker>
void run_partitioned(Worker&& worker, std::size_t count, int parallelism) {
  if (parallelism < 1) parallelism = 1;
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), count);
  if (workers <= 1) {
    worker(0, count);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&worker, begin, end] { worker(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace spinrc
