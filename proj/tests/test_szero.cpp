#include <doctest.h>

#include <algorithm>
#include <utility>
#include <vector>

#include "binmat/dpsampler.hpp"
#include "binmat/errors.hpp"
#include "binmat/oracle.hpp"
#include "binmat/szero.hpp"
#include "test_helpers.hpp"

using binmat::CounterRng;
using binmat::MarginPair;
using binmat::StructuralZeroMask;
using test_helpers::margins;

namespace {

StructuralZeroMask mask_from(int m, int n,
                             std::vector<std::pair<int, int>> pos) {
  return StructuralZeroMask::from_positions(m, n, pos);
}

}  // namespace

TEST_CASE("mask bookkeeping") {
  const auto diag = StructuralZeroMask::zero_diagonal(3, 3);
  CHECK(diag.xi() == std::vector<int>{1, 1, 1});
  CHECK(diag.zeta() == std::vector<int>{1, 1, 1});
  CHECK(diag.y() == std::vector<int>{1, 2, 3});
  CHECK(diag.one_per_row_col());
  CHECK(diag.forbids(1, 1));
  CHECK_FALSE(diag.forbids(1, 2));

  const auto general = mask_from(2, 3, {{0, 0}, {0, 2}});
  CHECK_FALSE(general.one_per_row_col());
  CHECK(general.xi() == std::vector<int>{2, 0});

  binmat::BinaryMatrix z(3, 3);
  z.set(0, 0, 1);
  CHECK_FALSE(diag.satisfied_by(z));
  z.set(0, 0, 0);
  z.set(0, 1, 1);
  CHECK(diag.satisfied_by(z));
}

TEST_CASE("masked row sort breaks ties by zero position") {
  {
    // Zero diagonal with equal row sums: already in tie order.
    const auto [mp, mask, ord] = binmat::sort_rows_sz(
        margins({1, 1, 1}, {1, 1, 1}), StructuralZeroMask::zero_diagonal(3, 3));
    CHECK(ord.to_original == std::vector<int>{0, 1, 2});
    CHECK(mp.row_sums == std::vector<int>{1, 1, 1});
  }
  {
    // y = (3, 1) with n = 2... the first row has no zero, so it sorts last.
    const auto [mp, mask, ord] =
        binmat::sort_rows_sz(margins({1, 1}, {1, 1}), mask_from(2, 2, {{1, 0}}));
    CHECK(ord.to_original == std::vector<int>{1, 0});
    CHECK(mask.row_cols[0] == std::vector<int>{0});
    CHECK(mask.row_cols[1].empty());
  }
  {
    // r = (2,1,1), zeros at columns (2,3,1): rows 2 and 3 tie and swap.
    const auto [mp, mask, ord] = binmat::sort_rows_sz(
        margins({2, 1, 1}, {2, 1, 1}),
        mask_from(3, 3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(ord.to_original == std::vector<int>{0, 2, 1});
  }
  CHECK_THROWS_AS(binmat::sort_rows_sz(margins({1, 1}, {1, 1}),
                                       mask_from(2, 2, {{0, 0}, {0, 1}})),
                  binmat::mask_error);
  CHECK_THROWS_AS(binmat::sort_rows_sz(margins({1, 1}, {0, 2}),
                                       mask_from(2, 2, {{0, 0}})),
                  binmat::shape_error);  // columns not sorted
}

TEST_CASE("masked first-column support on worked instances") {
  {
    // 3x3 zero diagonal, unit margins: the two valid first columns are the
    // derangement columns (0,1,0) and (0,0,1).
    const auto mp = margins({1, 1, 1}, {1, 1, 1});
    const auto mask = StructuralZeroMask::zero_diagonal(3, 3);
    const auto sup = binmat::first_column_support_sz(mp, mask);
    CHECK(sup.allowed == std::vector<std::uint8_t>{1, 3, 3});
    CHECK(sup.lower == std::vector<int>{0, 0, 1});
    CHECK(sup.upper == std::vector<int>{1, 1, 1});
  }
  {
    // 2x2 zero diagonal: only the anti-diagonal matrix exists.
    const auto sup = binmat::first_column_support_sz(
        margins({1, 1}, {1, 1}), StructuralZeroMask::zero_diagonal(2, 2));
    CHECK(sup.allowed == std::vector<std::uint8_t>{1, 2});
    CHECK(sup.lower == std::vector<int>{0, 1});
  }
}

TEST_CASE("empty mask reproduces the unmasked support") {
  CounterRng rng(808, 0);
  StructuralZeroMask empty_mask;
  int checked = 0;
  while (checked < 120) {
    MarginPair mp = test_helpers::random_instance(rng, 5, 5);
    if (mp.cols() < 2) continue;
    std::sort(mp.col_sums.begin(), mp.col_sums.end(), std::greater<int>());
    mp = binmat::sort_rows(mp).first;
    empty_mask.m = mp.rows();
    empty_mask.n = mp.cols();
    empty_mask.row_cols.assign(mp.rows(), {});
    const auto a = binmat::first_column_support(mp);
    const auto b = binmat::first_column_support_sz(mp, empty_mask);
    CHECK(a.allowed == b.allowed);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    ++checked;
  }
}

TEST_CASE("masked support matches brute-force completability") {
  CounterRng rng(4096, 0);
  int checked = 0;
  while (checked < 120) {
    auto [mp0, mask0] = test_helpers::random_masked_instance(rng, 4, 4);
    if (mp0.cols() < 2) continue;

    // Canonical order: columns by decreasing sum, then the masked row sort.
    std::vector<int> col_order(mp0.cols());
    for (int j = 0; j < mp0.cols(); ++j) col_order[j] = j;
    std::stable_sort(col_order.begin(), col_order.end(), [&](int a, int b) {
      return mp0.col_sums[a] > mp0.col_sums[b];
    });
    MarginPair mp = mp0;
    for (int j = 0; j < mp0.cols(); ++j) mp.col_sums[j] = mp0.col_sums[col_order[j]];
    StructuralZeroMask mask = mask0.permuted_columns(col_order);
    auto [sorted_mp, sorted_mask, ord] = binmat::sort_rows_sz(mp, mask);

    const auto sup = binmat::first_column_support_sz(sorted_mp, sorted_mask);
    const int m = sorted_mp.rows();

    // Residual mask for columns after the first.
    std::vector<std::pair<int, int>> rest_pos;
    for (int i = 0; i < m; ++i)
      for (int j : sorted_mask.row_cols[i])
        if (j >= 1) rest_pos.emplace_back(i, j - 1);
    const auto rest_mask = StructuralZeroMask::from_positions(
        m, sorted_mp.cols() - 1, rest_pos);

    MarginPair rest;
    rest.col_sums.assign(sorted_mp.col_sums.begin() + 1, sorted_mp.col_sums.end());
    for (int bits = 0; bits < (1 << m); ++bits) {
      bool in_support = true;
      int s = 0;
      for (int i = 0; i < m && in_support; ++i) {
        const int b = (bits >> i) & 1;
        s += b;
        in_support = sup.allows_value(i, b) && sup.in_window(i, s);
      }
      rest.row_sums = sorted_mp.row_sums;
      bool completable = true;
      for (int i = 0; i < m; ++i) {
        rest.row_sums[i] -= (bits >> i) & 1;
        if (rest.row_sums[i] < 0) completable = false;
        if (((bits >> i) & 1) && sorted_mask.forbids(i, 0)) completable = false;
      }
      if (completable) completable = binmat::omega_nonempty(rest, &rest_mask);
      CHECK(in_support == completable);
    }
    ++checked;
  }
}

TEST_CASE("masked samples always satisfy the mask") {
  const auto mp = margins({2, 2, 2, 2}, {2, 2, 2, 2});
  const auto mask = StructuralZeroMask::zero_diagonal(4, 4);
  for (int k = 0; k < 300; ++k) {
    CounterRng rng(99, k);
    const auto draw = binmat::sample_matrix(mp, binmat::Heuristic::cgm_sz,
                                            &mask, rng);
    CHECK(mask.satisfied_by(draw.matrix));
    CHECK(draw.matrix.row_sums() == mp.row_sums);
    CHECK(draw.matrix.col_sums() == mp.col_sums);
  }
}
