#include "binmat/szero.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "binmat/errors.hpp"

namespace binmat {

StructuralZeroMask StructuralZeroMask::from_positions(
    int m, int n, const std::vector<std::pair<int, int>>& zero_based_positions) {
  StructuralZeroMask mask;
  mask.m = m;
  mask.n = n;
  mask.row_cols.assign(m, {});
  for (const auto& [i, j] : zero_based_positions) {
    if (i < 0 || i >= m || j < 0 || j >= n)
      throw shape_error("structural zero out of range");
    mask.row_cols[i].push_back(j);
  }
  for (auto& cols : mask.row_cols) {
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  }
  return mask;
}

StructuralZeroMask StructuralZeroMask::zero_diagonal(int m, int n) {
  StructuralZeroMask mask;
  mask.m = m;
  mask.n = n;
  mask.row_cols.assign(m, {});
  for (int i = 0; i < std::min(m, n); ++i) mask.row_cols[i].push_back(i);
  return mask;
}

bool StructuralZeroMask::empty() const {
  for (const auto& cols : row_cols)
    if (!cols.empty()) return false;
  return true;
}

bool StructuralZeroMask::forbids(int i, int j) const {
  const auto& cols = row_cols[i];
  return std::binary_search(cols.begin(), cols.end(), j);
}

std::vector<int> StructuralZeroMask::xi() const {
  std::vector<int> out(m, 0);
  for (int i = 0; i < m; ++i) out[i] = static_cast<int>(row_cols[i].size());
  return out;
}

std::vector<int> StructuralZeroMask::zeta() const {
  std::vector<int> out(n, 0);
  for (const auto& cols : row_cols)
    for (int j : cols) ++out[j];
  return out;
}

bool StructuralZeroMask::one_per_row_col() const {
  for (const auto& cols : row_cols)
    if (cols.size() > 1) return false;
  for (int z : zeta())
    if (z > 1) return false;
  return true;
}

std::vector<int> StructuralZeroMask::y() const {
  std::vector<int> out(m, n + 1);
  for (int i = 0; i < m; ++i) {
    if (!row_cols[i].empty()) out[i] = row_cols[i].front() + 1;
  }
  return out;
}

StructuralZeroMask StructuralZeroMask::permuted_columns(
    std::span<const int> col_to_original) const {
  std::vector<int> to_new(n, -1);
  for (int j = 0; j < static_cast<int>(col_to_original.size()); ++j)
    to_new[col_to_original[j]] = j;

  StructuralZeroMask out;
  out.m = m;
  out.n = static_cast<int>(col_to_original.size());
  out.row_cols.assign(m, {});
  for (int i = 0; i < m; ++i) {
    for (int j : row_cols[i]) {
      if (to_new[j] >= 0) out.row_cols[i].push_back(to_new[j]);
    }
    std::sort(out.row_cols[i].begin(), out.row_cols[i].end());
  }
  return out;
}

bool StructuralZeroMask::satisfied_by(const BinaryMatrix& z) const {
  if (z.m != m || z.n != n) return false;
  for (int i = 0; i < m; ++i)
    for (int j : row_cols[i])
      if (z.at(i, j)) return false;
  return true;
}

namespace {

void require_one_per_row_col(const StructuralZeroMask& mask) {
  if (!mask.one_per_row_col())
    throw mask_error("mask has more than one forced zero in a row or column");
}

}  // namespace

std::tuple<MarginPair, StructuralZeroMask, RowOrdering> sort_rows_sz(
    const MarginPair& mp, const StructuralZeroMask& mask) {
  require_one_per_row_col(mask);
  if (mask.m != mp.rows() || mask.n != mp.cols())
    throw shape_error("mask dimensions do not match margins");
  if (!std::is_sorted(mp.col_sums.begin(), mp.col_sums.end(), std::greater<int>()))
    throw shape_error("column sums must be non-increasing before masked row sort");

  const int m = mp.rows();
  const std::vector<int> ypos = mask.y();

  RowOrdering ord;
  ord.to_original.resize(m);
  std::iota(ord.to_original.begin(), ord.to_original.end(), 0);
  std::stable_sort(ord.to_original.begin(), ord.to_original.end(), [&](int a, int b) {
    if (mp.row_sums[a] != mp.row_sums[b]) return mp.row_sums[a] > mp.row_sums[b];
    return ypos[a] < ypos[b];
  });
  ord.to_sorted.resize(m);
  for (int k = 0; k < m; ++k) ord.to_sorted[ord.to_original[k]] = k;

  MarginPair sorted;
  sorted.row_sums = apply_ordering(ord, mp.row_sums);
  sorted.col_sums = mp.col_sums;

  StructuralZeroMask sorted_mask;
  sorted_mask.m = m;
  sorted_mask.n = mask.n;
  sorted_mask.row_cols.resize(m);
  for (int k = 0; k < m; ++k) sorted_mask.row_cols[k] = mask.row_cols[ord.to_original[k]];

  return {std::move(sorted), std::move(sorted_mask), std::move(ord)};
}

namespace detail {

ColumnSupport first_column_support_sz_unchecked(const MarginPair& mp,
                                                const StructuralZeroMask& mask) {
  const int m = mp.rows();
  const int n = mp.cols();
  const int c1 = mp.col_sums[0];

  ColumnSupport sup;
  sup.allowed.resize(m);
  sup.lower.resize(m);
  sup.upper.resize(m);
  sup.column_sum = c1;

  for (int i = 0; i < m; ++i) {
    const int r = mp.row_sums[i];
    const int xi = static_cast<int>(mask.row_cols[i].size());
    const bool zero_here = !mask.row_cols[i].empty() && mask.row_cols[i].front() == 0;
    if (r > n - xi)
      sup.allowed[i] = 0;  // row cannot be completed; recursion reports no path
    else if (r == 0 || zero_here)
      sup.allowed[i] = 0b01;
    else if (r == n - xi)
      sup.allowed[i] = 0b10;
    else
      sup.allowed[i] = 0b11;
  }

  // Suffix sums of column margins: suffix[j] = sum of c_k for k >= j (0-based).
  std::vector<std::int64_t> suffix(n + 1, 0);
  for (int j = n - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + mp.col_sums[j];

  // zero_count[k] = number of rows among the first i with a forced zero in
  // 0-based column k >= 1; grows as i advances.
  std::vector<int> zero_count(n, 0);

  std::int64_t pref_r = 0;
  for (int i = 0; i < m; ++i) {
    pref_r += mp.row_sums[i];
    if (!mask.row_cols[i].empty() && mask.row_cols[i].front() >= 1)
      ++zero_count[mask.row_cols[i].front()];

    if (i == m - 1) {
      sup.lower[i] = c1;
      sup.upper[i] = c1;
      break;
    }

    // d_i = min over cut positions J of rows*(J-1) + tail column mass
    //       - masked cells inside columns 2..J of the first i+1 rows.
    const std::int64_t rows_so_far = i + 1;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    std::int64_t masked_prefix = 0;
    for (int J = 1; J <= n; ++J) {
      if (J >= 2) masked_prefix += zero_count[J - 1];
      const std::int64_t cand =
          rows_so_far * (J - 1) + suffix[J] - masked_prefix;
      best = std::min(best, cand);
    }
    sup.lower[i] = static_cast<int>(std::max<std::int64_t>(0, pref_r - best));
    sup.upper[i] = c1;
  }
  return sup;
}

}  // namespace detail

ColumnSupport first_column_support_sz(const MarginPair& mp,
                                      const StructuralZeroMask& mask) {
  require_one_per_row_col(mask);
  if (mask.m != mp.rows() || mask.n != mp.cols())
    throw shape_error("mask dimensions do not match margins");
  if (mp.cols() < 2)
    throw infeasible_error("first-column support needs at least two columns");
  return detail::first_column_support_sz_unchecked(mp, mask);
}

}  // namespace binmat
