#pragma once

#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "binmat/binary_matrix.hpp"
#include "binmat/margins.hpp"

namespace binmat {

// Locations that are forced to zero. Exact first-column supports exist only
// when every row and column holds at most one forced zero; more general
// masks are accepted but can only be enforced through pinned probabilities
// (sampling may then dead-end).
struct StructuralZeroMask {
  int m = 0;
  int n = 0;
  // Per-row sorted column indices of forced zeros.
  std::vector<std::vector<int>> row_cols;

  static StructuralZeroMask from_positions(
      int m, int n, const std::vector<std::pair<int, int>>& zero_based_positions);
  static StructuralZeroMask zero_diagonal(int m, int n);

  bool empty() const;
  bool forbids(int i, int j) const;
  std::vector<int> xi() const;    // per-row zero counts
  std::vector<int> zeta() const;  // per-column zero counts
  bool one_per_row_col() const;

  // Per-row zero column index, 1-based, n+1 when the row has none.
  // Requires one_per_row_col().
  std::vector<int> y() const;

  // Mask restricted to columns [first_col, n) of a column permutation,
  // reindexed to that submatrix.
  StructuralZeroMask permuted_columns(std::span<const int> col_to_original) const;

  // Satisfied by a matrix iff z .* a == 0 elementwise.
  bool satisfied_by(const BinaryMatrix& z) const;
};

// Row ordering for masked margins: decreasing row sums, ties broken by
// ascending position of the row's forced zero, remaining ties stable.
// Precondition: column sums already non-increasing. Throws mask_error if
// the mask has more than one zero in some row or column.
std::tuple<MarginPair, StructuralZeroMask, RowOrdering> sort_rows_sz(
    const MarginPair& mp, const StructuralZeroMask& mask);

// First-column support under a one-zero-per-row/column mask, for margins
// ordered by sort_rows_sz. Throws mask_error on invalid masks.
ColumnSupport first_column_support_sz(const MarginPair& mp,
                                      const StructuralZeroMask& mask);

namespace detail {
ColumnSupport first_column_support_sz_unchecked(const MarginPair& mp,
                                                const StructuralZeroMask& mask);
}

}  // namespace binmat
