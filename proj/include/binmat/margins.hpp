#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace binmat {

// Row and column sums of an m x n binary matrix.
struct MarginPair {
  std::vector<int> row_sums;
  std::vector<int> col_sums;

  int rows() const { return static_cast<int>(row_sums.size()); }
  int cols() const { return static_cast<int>(col_sums.size()); }
  std::int64_t total_row_sum() const;
  std::int64_t total_col_sum() const;

  bool operator==(const MarginPair& other) const = default;
};

// Row permutation produced by sorting. to_original[k] is the original index
// of the row at sorted position k; to_sorted is its inverse.
struct RowOrdering {
  std::vector<int> to_original;
  std::vector<int> to_sorted;
};

// Constraint sets for the first column of the current submatrix: per-row
// allowed values A_i (bit 0 / bit 1 of `allowed`) and the partial-sum window
// B_i kept as the interval [lower_i, upper_i]. B_i is always a contiguous
// range ending at the column sum, so an interval loses nothing and gives
// O(1) membership.
struct ColumnSupport {
  std::vector<std::uint8_t> allowed;
  std::vector<int> lower;
  std::vector<int> upper;
  int column_sum = 0;

  int size() const { return static_cast<int>(allowed.size()); }
  bool allows_value(int i, int v) const { return (allowed[i] >> v) & 1u; }
  bool in_window(int i, int s) const { return s >= lower[i] && s <= upper[i]; }
};

// Conjugate sequence: out[j-1] = #{i : t_i >= j} for j = 1..length_out.
std::vector<int> conjugate(std::span<const int> t, int length_out);

// True iff some binary matrix has these margins (Gale-Ryser). Returns false
// for structurally impossible inputs (negative entries, r_i > n, c_j > m,
// mismatched totals) instead of raising.
bool gale_ryser_feasible(const MarginPair& mp);

// Stable sort of rows by decreasing row sum; ties keep original order.
std::pair<MarginPair, RowOrdering> sort_rows(const MarginPair& mp);

// Support of the first column for sorted feasible margins with n >= 2.
// Throws infeasible_error when the preconditions fail.
ColumnSupport first_column_support(const MarginPair& mp);

namespace detail {
// Same as first_column_support but trusts the caller about sortedness and
// feasibility; used by the per-column recursion where both hold by
// construction.
ColumnSupport first_column_support_unchecked(const MarginPair& mp);
}  // namespace detail

// Helpers for applying/undoing a RowOrdering to per-row data.
template <typename T>
std::vector<T> apply_ordering(const RowOrdering& ord, const std::vector<T>& v) {
  std::vector<T> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[ord.to_original[k]];
  return out;
}

template <typename T>
std::vector<T> undo_ordering(const RowOrdering& ord, const std::vector<T>& v) {
  std::vector<T> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[ord.to_original[k]] = v[k];
  return out;
}

}  // namespace binmat
