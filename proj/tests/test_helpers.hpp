#pragma once

#include <utility>
#include <vector>

#include "binmat/binary_matrix.hpp"
#include "binmat/margins.hpp"
#include "binmat/rng.hpp"
#include "binmat/szero.hpp"

namespace test_helpers {

inline binmat::MarginPair margins(std::vector<int> r, std::vector<int> c) {
  binmat::MarginPair mp;
  mp.row_sums = std::move(r);
  mp.col_sums = std::move(c);
  return mp;
}

// Margins of a random binary matrix: feasible and nonempty by construction.
inline binmat::MarginPair random_instance(binmat::CounterRng& rng, int max_m,
                                          int max_n) {
  const int m = 1 + static_cast<int>(rng.next_below(max_m));
  const int n = 1 + static_cast<int>(rng.next_below(max_n));
  const double density = 0.15 + 0.7 * rng.next_unit();
  binmat::BinaryMatrix z(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (rng.next_unit() < density) z.set(i, j, 1);
  return margins(z.row_sums(), z.col_sums());
}

// Random margins plus a one-zero-per-row/column mask that provably admits a
// matrix: the witness is drawn first, avoiding masked cells.
inline std::pair<binmat::MarginPair, binmat::StructuralZeroMask>
random_masked_instance(binmat::CounterRng& rng, int max_m, int max_n) {
  const int m = 1 + static_cast<int>(rng.next_below(max_m));
  const int n = 1 + static_cast<int>(rng.next_below(max_n));
  const int max_zeros = std::min(m, n);
  const int k = static_cast<int>(rng.next_below(max_zeros + 1));

  std::vector<int> rows(m), cols(n);
  for (int i = 0; i < m; ++i) rows[i] = i;
  for (int j = 0; j < n; ++j) cols[j] = j;
  for (int i = m - 1; i > 0; --i)
    std::swap(rows[i], rows[rng.next_below(i + 1)]);
  for (int j = n - 1; j > 0; --j)
    std::swap(cols[j], cols[rng.next_below(j + 1)]);

  std::vector<std::pair<int, int>> positions;
  for (int t = 0; t < k; ++t) positions.emplace_back(rows[t], cols[t]);
  auto mask = binmat::StructuralZeroMask::from_positions(m, n, positions);

  const double density = 0.15 + 0.7 * rng.next_unit();
  binmat::BinaryMatrix z(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (!mask.forbids(i, j) && rng.next_unit() < density) z.set(i, j, 1);
  return {margins(z.row_sums(), z.col_sums()), std::move(mask)};
}

}  // namespace test_helpers
