#pragma once

#include <cstdint>
#include <vector>

namespace binmat {

// Counter-based splittable generator built on the splitmix64 finalizer.
// Output i of stream (seed, stream) is mix(key(seed, stream) + i * gamma),
// so streams can be created independently per draw: batch sample k uses
// stream k and the batch is reproducible regardless of execution order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next();

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  // Uniform integer in [0, bound); bound >= 1. Unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// k distinct indices from {0, ..., n-1}, uniformly over all k-subsets,
// returned in increasing order. Partial Fisher-Yates.
std::vector<int> sample_index_subset(int n, int k, CounterRng& rng);

}  // namespace binmat
