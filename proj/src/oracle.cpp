#include "binmat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>

#include "binmat/errors.hpp"

namespace binmat {

namespace {

constexpr int kMaxCells = 25;

void check_enumeration_size(const MarginPair& mp) {
  if (mp.rows() < 1 || mp.cols() < 1)
    throw size_limit_error("margins must be non-empty");
  if (static_cast<long long>(mp.rows()) * mp.cols() > kMaxCells)
    throw size_limit_error("instance too large for brute-force enumeration");
}

// Depth-first search over rows: place each row's ones into columns that
// still have capacity (and are not masked), tracking residual column sums.
// Visits every matrix with the given margins exactly once.
struct RowSearch {
  const MarginPair& mp;
  const StructuralZeroMask* mask;
  std::vector<int> col_left;
  BinaryMatrix work;
  std::function<bool(const BinaryMatrix&)> emit;  // return true to stop

  RowSearch(const MarginPair& margins, const StructuralZeroMask* msk)
      : mp(margins), mask(msk), col_left(margins.col_sums),
        work(margins.rows(), margins.cols()) {}

  bool run() { return row(0); }

  bool row(int i) {
    if (i == mp.rows()) {
      for (int left : col_left)
        if (left != 0) return false;
      return emit(work);
    }
    // A column needing more ones than there are rows left is unfillable.
    for (int left : col_left)
      if (left > mp.rows() - i) return false;
    return place(i, 0, mp.row_sums[i]);
  }

  bool place(int i, int j, int need) {
    const int n = mp.cols();
    if (need == 0) {
      for (int k = j; k < n; ++k) work.set(i, k, 0);
      return row(i + 1);
    }
    if (n - j < need) return false;
    // Try a one at column j (if allowed), then a zero.
    if (col_left[j] > 0 && (mask == nullptr || !mask->forbids(i, j))) {
      work.set(i, j, 1);
      --col_left[j];
      if (place(i, j + 1, need - 1)) return true;
      ++col_left[j];
    }
    work.set(i, j, 0);
    return place(i, j + 1, need);
  }
};

bool margins_obviously_bad(const MarginPair& mp) {
  for (int v : mp.row_sums)
    if (v < 0 || v > mp.cols()) return true;
  for (int v : mp.col_sums)
    if (v < 0 || v > mp.rows()) return true;
  return mp.total_row_sum() != mp.total_col_sum();
}

std::string pack_key(const std::vector<int>& values, int col) {
  std::string key;
  key.reserve(values.size() * 2 + 2);
  for (int v : values) {
    key.push_back(static_cast<char>(v & 0xff));
    key.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  key.push_back(static_cast<char>(col & 0xff));
  key.push_back(static_cast<char>((col >> 8) & 0xff));
  return key;
}

// Unmasked exact count: recursion over columns with rows grouped by equal
// residual sums. Choosing k ones inside a group of equal rows yields
// binom(group, k) first columns with identical residual margins.
class GroupedCounter {
 public:
  GroupedCounter(std::vector<int> cols_desc, std::size_t budget)
      : cols_(std::move(cols_desc)), budget_(budget) {}

  BigUint count(std::vector<int> rows_desc, int j) {
    std::int64_t left = 0;
    for (int k = j; k < static_cast<int>(cols_.size()); ++k) left += cols_[k];
    const std::int64_t have =
        std::accumulate(rows_desc.begin(), rows_desc.end(), std::int64_t{0});
    if (have != left) return BigUint();
    if (j == static_cast<int>(cols_.size()) || have == 0) {
      return have == 0 ? BigUint(1) : BigUint();
    }

    const std::string key = pack_key(rows_desc, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_) throw budget_error("exact count memo budget exceeded");

    // Group equal residual row sums.
    std::vector<std::pair<int, int>> groups;  // (value, count)
    for (int v : rows_desc) {
      if (!groups.empty() && groups.back().first == v)
        ++groups.back().second;
      else
        groups.emplace_back(v, 1);
    }

    BigUint total;
    std::vector<int> take(groups.size(), 0);
    allocate(groups, take, 0, cols_[j], rows_desc, j, total);
    memo_.emplace(key, total);
    return total;
  }

 private:
  void allocate(const std::vector<std::pair<int, int>>& groups,
                std::vector<int>& take, std::size_t g, int need,
                const std::vector<int>& rows_desc, int j, BigUint& total) {
    if (g == groups.size()) {
      if (need != 0) return;
      std::vector<int> next;
      next.reserve(rows_desc.size());
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto [value, cnt] = groups[gi];
        // take[gi] rows drop to value-1; zero rows cannot take a one.
        for (int t = 0; t < take[gi]; ++t) next.push_back(value - 1);
        for (int t = take[gi]; t < cnt; ++t) next.push_back(value);
      }
      std::sort(next.begin(), next.end(), std::greater<int>());
      MarginPair residual;
      residual.row_sums = next;
      residual.col_sums.assign(cols_.begin() + j + 1, cols_.end());
      if (!residual.col_sums.empty() && !gale_ryser_feasible(residual)) return;

      BigUint ways = count(std::move(next), j + 1);
      if (ways.is_zero()) return;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (take[gi] > 0)
          ways = ways * big_binomial(groups[gi].second, take[gi]);
      }
      total += ways;
      return;
    }
    const auto [value, cnt] = groups[g];
    const int max_take = value >= 1 ? std::min(cnt, need) : 0;
    for (int t = 0; t <= max_take; ++t) {
      take[g] = t;
      allocate(groups, take, g + 1, need - t, rows_desc, j, total);
    }
    take[g] = 0;
  }

  std::vector<int> cols_;
  std::size_t budget_;
  std::unordered_map<std::string, BigUint> memo_;
};

// Masked exact count: plain column recursion; rows are distinguishable, so
// the memo key keeps their order. Adequate for the small masked instances
// the oracle is used on.
class MaskedCounter {
 public:
  MaskedCounter(std::vector<int> cols, std::vector<std::vector<int>> forbidden,
                std::size_t budget)
      : cols_(std::move(cols)), forbidden_(std::move(forbidden)), budget_(budget) {}

  BigUint count(std::vector<int> rows, int j) {
    std::int64_t left = 0;
    for (int k = j; k < static_cast<int>(cols_.size()); ++k) left += cols_[k];
    const std::int64_t have =
        std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
    if (have != left) return BigUint();
    if (j == static_cast<int>(cols_.size()) || have == 0)
      return have == 0 ? BigUint(1) : BigUint();

    const std::string key = pack_key(rows, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_) throw budget_error("exact count memo budget exceeded");

    BigUint total;
    std::vector<std::uint8_t> pick(rows.size(), 0);
    choose(rows, pick, 0, cols_[j], j, total);
    memo_.emplace(key, total);
    return total;
  }

 private:
  void choose(std::vector<int>& rows, std::vector<std::uint8_t>& pick,
              std::size_t i, int need, int j, BigUint& total) {
    if (need == 0) {
      std::vector<int> next = rows;
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (pick[k]) --next[k];
      total += count(std::move(next), j + 1);
      return;
    }
    if (rows.size() - i < static_cast<std::size_t>(need)) return;
    if (i == rows.size()) return;
    const bool blocked =
        std::binary_search(forbidden_[i].begin(), forbidden_[i].end(), j);
    if (rows[i] > 0 && !blocked) {
      pick[i] = 1;
      choose(rows, pick, i + 1, need - 1, j, total);
      pick[i] = 0;
    }
    choose(rows, pick, i + 1, need, j, total);
  }

  std::vector<int> cols_;
  std::vector<std::vector<int>> forbidden_;
  std::size_t budget_;
  std::unordered_map<std::string, BigUint> memo_;
};

}  // namespace

std::vector<BinaryMatrix> enumerate_omega(const MarginPair& mp,
                                          const StructuralZeroMask* mask) {
  check_enumeration_size(mp);
  std::vector<BinaryMatrix> out;
  if (margins_obviously_bad(mp)) return out;
  RowSearch search(mp, mask);
  search.emit = [&](const BinaryMatrix& z) {
    out.push_back(z);
    return false;
  };
  search.run();
  return out;
}

bool omega_nonempty(const MarginPair& mp, const StructuralZeroMask* mask) {
  check_enumeration_size(mp);
  if (margins_obviously_bad(mp)) return false;
  RowSearch search(mp, mask);
  search.emit = [](const BinaryMatrix&) { return true; };
  return search.run();
}

ExactCount exact_count_dp(const MarginPair& mp, const StructuralZeroMask* mask,
                          std::size_t memo_budget) {
  ExactCount result;
  if (mp.rows() < 1 || mp.cols() < 1) return result;
  if (margins_obviously_bad(mp)) return result;

  if (mask == nullptr || mask->empty()) {
    std::vector<int> rows = mp.row_sums;
    std::sort(rows.begin(), rows.end(), std::greater<int>());
    std::vector<int> cols = mp.col_sums;
    std::sort(cols.begin(), cols.end(), std::greater<int>());
    GroupedCounter counter(std::move(cols), memo_budget);
    result.value = counter.count(std::move(rows), 0);
    return result;
  }

  if (mask->m != mp.rows() || mask->n != mp.cols())
    throw shape_error("mask dimensions do not match margins");
  MaskedCounter counter(mp.col_sums, mask->row_cols, memo_budget);
  result.value = counter.count(mp.row_sums, 0);
  return result;
}

ExactCount pathological_count(int heavy_row_sum, int heavy_col_sum, int m, int n) {
  if (m < 1 || n < 1) throw shape_error("matrix must be non-empty");
  if (heavy_row_sum < 0 || heavy_row_sum > n || heavy_col_sum < 0 ||
      heavy_col_sum > m)
    throw shape_error("heavy margins out of range");

  const int big_r = heavy_row_sum;
  const int big_c = heavy_col_sum;
  ExactCount result;
  // Condition on the corner cell shared by the heavy row and heavy column.
  // Corner zero: the heavy row picks big_r of the other n-1 columns, the
  // heavy column big_c of the other m-1 rows, and the untouched unit rows
  // and columns pair up in a perfect matching. Corner one: same with one
  // fewer to place on each side.
  if (m - 1 - big_c == n - 1 - big_r && m - 1 - big_c >= 0) {
    result.value += big_binomial(n - 1, big_r) * big_binomial(m - 1, big_c) *
                    big_factorial(m - 1 - big_c);
  }
  if (m - big_c == n - big_r && m - big_c >= 0 && big_r >= 1 && big_c >= 1) {
    result.value += big_binomial(n - 1, big_r - 1) *
                    big_binomial(m - 1, big_c - 1) * big_factorial(m - big_c);
  }
  return result;
}

BinaryMatrix exact_uniform_sample(const MarginPair& mp,
                                  const StructuralZeroMask* mask,
                                  CounterRng& rng) {
  const std::vector<BinaryMatrix> omega = enumerate_omega(mp, mask);
  if (omega.empty()) throw infeasible_error("margins admit no binary matrix");
  return omega[static_cast<std::size_t>(rng.next_below(omega.size()))];
}

double tv_distance_from_uniform(const MarginPair& mp, Heuristic h,
                                const StructuralZeroMask* mask) {
  const std::vector<BinaryMatrix> omega = enumerate_omega(mp, mask);
  if (omega.empty()) throw infeasible_error("margins admit no binary matrix");
  const double uniform = 1.0 / static_cast<double>(omega.size());
  double acc = 0.0;
  double q_total = 0.0;
  for (const BinaryMatrix& z : omega) {
    const double lq = eval_matrix(mp, h, mask, z);
    const double q = lq == -std::numeric_limits<double>::infinity()
                         ? 0.0
                         : std::exp(lq);
    acc += std::abs(q - uniform);
    q_total += q;
  }
  // Proposal mass outside the target support (possible only with pinned
  // general masks) also counts toward the distance.
  return 0.5 * (acc + std::max(0.0, 1.0 - q_total));
}

}  // namespace binmat
