#pragma once

#include <cstddef>
#include <vector>

#include "binmat/bigint.hpp"
#include "binmat/binary_matrix.hpp"
#include "binmat/dpsampler.hpp"
#include "binmat/margins.hpp"
#include "binmat/rng.hpp"
#include "binmat/szero.hpp"

namespace binmat {

// Exact matrix count; arbitrary precision because counts of interest exceed
// 10^200.
struct ExactCount {
  BigUint value;
  double log_value() const { return value.log_natural(); }
};

// All matrices with the given margins (and mask). Guarded: refuses
// instances with more than 25 cells. Independent of the sampler: plain
// depth-first search over rows with column-capacity pruning.
std::vector<BinaryMatrix> enumerate_omega(const MarginPair& mp,
                                          const StructuralZeroMask* mask = nullptr);

// Same search, stopping at the first matrix found.
bool omega_nonempty(const MarginPair& mp,
                    const StructuralZeroMask* mask = nullptr);

// Exact count by the column recursion: sum over feasible first columns of
// the count of the residual margins, memoized on (sorted residual row sums,
// column index). Rows with equal sums are interchangeable, which is what
// makes mid-sized instances tractable. With a mask the rows are no longer
// interchangeable and the memo key keeps their order. Throws budget_error
// when the memo exceeds `memo_budget` states.
ExactCount exact_count_dp(const MarginPair& mp,
                          const StructuralZeroMask* mask = nullptr,
                          std::size_t memo_budget = 10'000'000);

// Closed-form exact count for margins r = (R, 1, ..., 1), c = (C, 1, ..., 1)
// (m rows, n columns), by conditioning on the corner entry: each case leaves
// binomial choices for the heavy row and column and a perfect matching of
// the leftover unit rows and columns. Throws shape_error for arguments that
// do not describe such a family.
ExactCount pathological_count(int heavy_row_sum, int heavy_col_sum, int m, int n);

// Uniform draw over the enumerated set; same size guard as enumerate_omega.
BinaryMatrix exact_uniform_sample(const MarginPair& mp,
                                  const StructuralZeroMask* mask, CounterRng& rng);

// Total variation distance between the proposal and the uniform target,
// computed over the enumerated set (plus any proposal mass lost to dead
// ends, which is zero in exact-support modes).
double tv_distance_from_uniform(const MarginPair& mp, Heuristic h,
                                const StructuralZeroMask* mask = nullptr);

}  // namespace binmat
