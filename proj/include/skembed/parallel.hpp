#ifndef SKEMBED_PARALLEL_HPP
#define SKEMBED_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "skembed/rng.hpp"

namespace skembed {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return static_cast<int>(hw > 8 ? 8 : hw);
}

/// Runs `count` independent replications. Replication j draws from the
/// stream derived from (master_seed, phase, j) no matter which worker picks
/// it up, so results do not depend on the worker count. Callers write
/// results into preallocated slots indexed by j and reduce in j-order.
///
/// F: void(std::size_t rep_index, Rng& rng)
template <typename F>
void for_each_replication(std::size_t count, std::uint64_t master_seed,
                          std::uint64_t phase, int workers, F&& fn) {
  const int nworkers = resolve_workers(workers);
  if (nworkers <= 1 || count <= 1) {
    for (std::size_t j = 0; j < count; ++j) {
      Rng rng(derive_seed(master_seed, phase, j));
      fn(j, rng);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= count) return;
      Rng rng(derive_seed(master_seed, phase, j));
      fn(j, rng);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nworkers));
  for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

/// Number of fixed sampling chunks used by sample_parallel. Constant by
/// design: the chunk schedule is part of the reproducibility contract.
inline constexpr std::size_t kSampleChunks = 64;

/// Fills a vector with `count` i.i.d. draws. The sample is split into
/// kSampleChunks contiguous chunks; chunk c uses the stream derived from
/// (master_seed, phase, c), independent of the worker count.
///
/// Draw: double(Rng&)
template <typename Draw>
std::vector<double> sample_parallel(std::size_t count, std::uint64_t master_seed,
                                    std::uint64_t phase, int workers,
                                    Draw&& draw) {
  std::vector<double> out(count);
  const std::size_t chunks = count < kSampleChunks ? (count > 0 ? count : 1)
                                                   : kSampleChunks;
  for_each_replication(chunks, master_seed, phase, workers,
                       [&](std::size_t c, Rng& rng) {
                         const std::size_t lo = count * c / chunks;
                         const std::size_t hi = count * (c + 1) / chunks;
                         for (std::size_t i = lo; i < hi; ++i) out[i] = draw(rng);
                       });
  return out;
}

}  // namespace skembed

#endif  // SKEMBED_PARALLEL_HPP
