#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace emtrack {

// Worker-pool size used by parallel_for/parallel_reduce. Set once from the CLI
// --threads flag; library code only reads it.
int worker_count();
void set_worker_count(int n);

// Index-range parallel map. Blocks of fixed size are handed to workers via an
// atomic cursor, so results written to disjoint slots are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Deterministic reduction: the range is split into fixed-size blocks, each
// block reduced by one worker, and block results combined in index order.
// The combination order never depends on the thread count.
template <typename T, typename BlockFn, typename CombineFn>
T parallel_reduce(std::size_t n, T init, BlockFn block, CombineFn combine,
                  std::size_t block_size = 1024) {
  if (n == 0) return init;
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<T> partial(nblocks, init);
  const int workers = worker_count();
  if (workers <= 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      const std::size_t lo = b * block_size;
      const std::size_t hi = lo + block_size < n ? lo + block_size : n;
      partial[b] = block(lo, hi, init);
    }
  } else {
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
      for (;;) {
        const std::size_t b = cursor.fetch_add(1);
        if (b >= nblocks) break;
        const std::size_t lo = b * block_size;
        const std::size_t hi = lo + block_size < n ? lo + block_size : n;
        partial[b] = block(lo, hi, init);
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers) - 1);
    for (int i = 1; i < workers; ++i) threads.emplace_back(work);
    work();
    for (auto& t : threads) t.join();
  }
  T acc = init;
  for (std::size_t b = 0; b < nblocks; ++b) acc = combine(acc, partial[b]);
  return acc;
}

}  // namespace emtrack
