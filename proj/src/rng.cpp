#include "binmat/rng.hpp"

#include <algorithm>
#include <cassert>

namespace binmat {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele, Lea & Flood; Vigna's fixed-increment form).
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) {
  // Two mixing rounds so that (seed, stream) pairs with small Hamming
  // distance do not produce correlated keys.
  key_ = mix(mix(seed + kGamma) ^ mix(stream + 0xBF58476D1CE4E5B9ULL));
}

std::uint64_t CounterRng::next() {
  std::uint64_t z = key_ + (++counter_) * kGamma;
  return mix(z);
}

double CounterRng::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t bound) {
  assert(bound >= 1);
  if (bound == 1) return 0;
  // Reject the tail that would bias the modulus.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

std::vector<int> sample_index_subset(int n, int k, CounterRng& rng) {
  assert(0 <= k && k <= n);
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace binmat
