#include "binmat/margins.hpp"

#include <algorithm>
#include <numeric>

#include "binmat/errors.hpp"

namespace binmat {

std::int64_t MarginPair::total_row_sum() const {
  return std::accumulate(row_sums.begin(), row_sums.end(), std::int64_t{0});
}

std::int64_t MarginPair::total_col_sum() const {
  return std::accumulate(col_sums.begin(), col_sums.end(), std::int64_t{0});
}

std::vector<int> conjugate(std::span<const int> t, int length_out) {
  // Bucket the entries, then out[j-1] = #{i : t_i >= j} by suffix sums.
  std::vector<int> freq(static_cast<std::size_t>(length_out) + 1, 0);
  for (int v : t) {
    if (v >= 1) ++freq[std::min(v, length_out)];
  }
  std::vector<int> out(length_out, 0);
  int running = 0;
  for (int j = length_out; j >= 1; --j) {
    running += freq[j];
    out[j - 1] = running;
  }
  return out;
}

bool gale_ryser_feasible(const MarginPair& mp) {
  const int m = mp.rows();
  const int n = mp.cols();
  if (m < 1 || n < 1) return false;
  for (int v : mp.row_sums)
    if (v < 0 || v > n) return false;
  for (int v : mp.col_sums)
    if (v < 0 || v > m) return false;
  if (mp.total_row_sum() != mp.total_col_sum()) return false;

  std::vector<int> r = mp.row_sums;
  std::sort(r.begin(), r.end(), std::greater<int>());
  const std::vector<int> cstar = conjugate(mp.col_sums, m);

  std::int64_t pref_r = 0, pref_c = 0;
  for (int i = 0; i < m; ++i) {
    pref_r += r[i];
    pref_c += cstar[i];
    if (pref_r > pref_c) return false;
  }
  // Totals already matched above; c_j <= m means the length-m conjugate
  // captures the full column mass, so the final prefix check is equality.
  return true;
}

std::pair<MarginPair, RowOrdering> sort_rows(const MarginPair& mp) {
  const int m = mp.rows();
  RowOrdering ord;
  ord.to_original.resize(m);
  std::iota(ord.to_original.begin(), ord.to_original.end(), 0);
  std::stable_sort(ord.to_original.begin(), ord.to_original.end(),
                   [&](int a, int b) { return mp.row_sums[a] > mp.row_sums[b]; });
  ord.to_sorted.resize(m);
  for (int k = 0; k < m; ++k) ord.to_sorted[ord.to_original[k]] = k;

  MarginPair sorted;
  sorted.row_sums = apply_ordering(ord, mp.row_sums);
  sorted.col_sums = mp.col_sums;
  return {std::move(sorted), std::move(ord)};
}

namespace detail {

ColumnSupport first_column_support_unchecked(const MarginPair& mp) {
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
    if (r == 0)
      sup.allowed[i] = 0b01;
    else if (r == n)
      sup.allowed[i] = 0b10;
    else
      sup.allowed[i] = 0b11;
  }

  const std::span<const int> cprime(mp.col_sums.data() + 1,
                                    static_cast<std::size_t>(n - 1));
  const std::vector<int> cpstar = conjugate(cprime, m);

  std::int64_t pref_r = 0, pref_cp = 0;
  for (int i = 0; i < m; ++i) {
    pref_r += mp.row_sums[i];
    pref_cp += cpstar[i];
    if (i == m - 1) {
      sup.lower[i] = c1;
      sup.upper[i] = c1;
    } else {
      sup.lower[i] = static_cast<int>(std::max<std::int64_t>(0, pref_r - pref_cp));
      sup.upper[i] = c1;
    }
  }
  return sup;
}

}  // namespace detail

ColumnSupport first_column_support(const MarginPair& mp) {
  if (mp.cols() < 2)
    throw infeasible_error("first-column support needs at least two columns");
  if (!std::is_sorted(mp.row_sums.begin(), mp.row_sums.end(), std::greater<int>()))
    throw infeasible_error("row sums must be non-increasing");
  if (!gale_ryser_feasible(mp))
    throw infeasible_error("margins admit no binary matrix");
  return detail::first_column_support_unchecked(mp);
}

}  // namespace binmat
