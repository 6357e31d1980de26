#include "binmat/dpsampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "binmat/errors.hpp"

namespace binmat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

enum class MaskMode { none, exact, pinned };

}  // namespace

ColumnChainFactors build_factors(const BernoulliProfile& profile,
                                 const ColumnSupport& support,
                                 double log_shift) {
  const int m = support.size();
  const int c1 = support.column_sum;
  const int w = c1 + 1;

  ColumnChainFactors f;
  f.m = m;
  f.c1 = c1;
  f.stay.assign(static_cast<std::size_t>(m) * w, kNegInf);
  f.step.assign(static_cast<std::size_t>(m) * w, kNegInf);

  for (int i = 0; i < m; ++i) {
    const bool zero_ok = support.allows_value(i, 0);
    const bool one_ok = support.allows_value(i, 1);
    const double lq = profile.log_1mp(i);
    const double lp = profile.log_p(i);
    double* stay_row = f.stay.data() + static_cast<std::size_t>(i) * w;
    double* step_row = f.step.data() + static_cast<std::size_t>(i) * w;
    for (int s = 0; s <= c1; ++s) {
      if (zero_ok && support.in_window(i, s)) {
        const double v = lq + log_shift;
        if (v != kNegInf) stay_row[s] = v;
      }
      if (one_ok && s + 1 <= c1 && support.in_window(i, s + 1)) {
        const double v = lp + log_shift;
        if (v != kNegInf) step_row[s] = v;
      }
    }
  }
  return f;
}

ColumnChain backward_pass(const ColumnChainFactors& factors) {
  const int m = factors.m;
  const int c1 = factors.c1;
  const int w = c1 + 1;

  ColumnChain chain;
  chain.m = m;
  chain.c1 = c1;
  chain.log_beta_stay.assign(static_cast<std::size_t>(m) * w, kNegInf);
  chain.log_beta_step.assign(static_cast<std::size_t>(m) * w, kNegInf);
  chain.log_pi_stay.assign(static_cast<std::size_t>(m) * w, kNegInf);
  chain.log_pi_step.assign(static_cast<std::size_t>(m) * w, kNegInf);

  std::vector<double> margin_next(w, kNegInf);

  for (int i = m - 1; i >= 0; --i) {
    double* bs = chain.log_beta_stay.data() + static_cast<std::size_t>(i) * w;
    double* bt = chain.log_beta_step.data() + static_cast<std::size_t>(i) * w;
    const double* fs = factors.stay.data() + static_cast<std::size_t>(i) * w;
    const double* ft = factors.step.data() + static_cast<std::size_t>(i) * w;

    double stage_max = kNegInf;
    for (int s = 0; s <= c1; ++s) {
      if (i == m - 1) {
        bs[s] = fs[s];
        bt[s] = ft[s];
      } else {
        bs[s] = fs[s] == kNegInf ? kNegInf : fs[s] + margin_next[s];
        bt[s] = (ft[s] == kNegInf || s + 1 > c1)
                    ? kNegInf
                    : ft[s] + margin_next[s + 1];
      }
      stage_max = std::max(stage_max, std::max(bs[s], bt[s]));
    }

    // Arbitrary per-stage rescaling (here: subtract the stage max) keeps the
    // recursion inside the representable range and cancels in every ratio.
    if (stage_max != kNegInf && stage_max != 0.0) {
      for (int s = 0; s <= c1; ++s) {
        if (bs[s] != kNegInf) bs[s] -= stage_max;
        if (bt[s] != kNegInf) bt[s] -= stage_max;
      }
    }

    for (int s = 0; s <= c1; ++s)
      margin_next[s] = log_add_exp(bs[s], bt[s]);
  }

  if (margin_next[0] == kNegInf)
    throw no_valid_path_error("no column satisfies the support constraints");

  for (int i = 0; i < m; ++i) {
    const double* bs = chain.log_beta_stay.data() + static_cast<std::size_t>(i) * w;
    const double* bt = chain.log_beta_step.data() + static_cast<std::size_t>(i) * w;
    double* ps = chain.log_pi_stay.data() + static_cast<std::size_t>(i) * w;
    double* pt = chain.log_pi_step.data() + static_cast<std::size_t>(i) * w;
    for (int s = 0; s <= c1; ++s) {
      const double total = log_add_exp(bs[s], bt[s]);
      if (total == kNegInf) continue;
      ps[s] = bs[s] == kNegInf ? kNegInf : bs[s] - total;
      pt[s] = bt[s] == kNegInf ? kNegInf : bt[s] - total;
    }
  }
  return chain;
}

std::pair<std::vector<std::uint8_t>, double> sample_column(const ColumnChain& chain,
                                                           CounterRng& rng) {
  const int m = chain.m;
  std::vector<std::uint8_t> b(m, 0);
  double logp = 0.0;
  int s = 0;
  for (int i = 0; i < m; ++i) {
    const double ls = chain.pi_stay(i, s);
    const double lt = chain.pi_step(i, s);
    bool take_step;
    if (lt == kNegInf) {
      take_step = false;
    } else if (ls == kNegInf) {
      take_step = true;
    } else {
      take_step = rng.next_unit() >= std::exp(ls);
    }
    if (take_step) {
      b[i] = 1;
      logp += lt;
      ++s;
    } else {
      logp += ls;
    }
  }
  return {std::move(b), logp};
}

double eval_column(const ColumnChain& chain, std::span<const std::uint8_t> b) {
  double logp = 0.0;
  int s = 0;
  for (int i = 0; i < chain.m; ++i) {
    if (b[i]) {
      if (s + 1 > chain.c1) return kNegInf;
      const double lt = chain.pi_step(i, s);
      if (lt == kNegInf) return kNegInf;
      logp += lt;
      ++s;
    } else {
      const double ls = chain.pi_stay(i, s);
      if (ls == kNegInf) return kNegInf;
      logp += ls;
    }
  }
  return logp;
}

namespace {

// One driver for both sampling and evaluation so the two follow bit-equal
// recursions. `out` is filled when sampling; `given` supplies the columns
// when evaluating (margins and mask already verified by the caller).
double run_columns(const MarginPair& mp, Heuristic h,
                   const StructuralZeroMask* mask, const SamplerOptions& opts,
                   BinaryMatrix* out, const BinaryMatrix* given,
                   CounterRng* rng) {
  const int m = mp.rows();
  const int n = mp.cols();
  if (m < 1 || n < 1) throw infeasible_error("margins must be non-empty");

  MaskMode mode = MaskMode::none;
  if (mask != nullptr && !mask->empty()) {
    if (mask->m != m || mask->n != n)
      throw shape_error("mask dimensions do not match margins");
    mode = mask->one_per_row_col() ? MaskMode::exact : MaskMode::pinned;
  }
  // A nominal mask with no zeros reduces to the plain recursion; the
  // corrected heuristics reduce to their base forms with it.
  if (mode == MaskMode::none) h = unmasked_variant(h);

  if (!opts.sort_columns && mode != MaskMode::none)
    throw error("column sorting cannot be disabled when a mask is present");

  const bool sampling = (given == nullptr);
  if (sampling) {
    if (mode == MaskMode::exact) {
      const std::vector<int> xi = mask->xi();
      const std::vector<int> zeta = mask->zeta();
      bool ok = mp.total_row_sum() == mp.total_col_sum();
      for (int i = 0; ok && i < m; ++i)
        ok = mp.row_sums[i] >= 0 && mp.row_sums[i] <= n - xi[i];
      for (int j = 0; ok && j < n; ++j)
        ok = mp.col_sums[j] >= 0 && mp.col_sums[j] <= m - zeta[j];
      if (!ok) throw infeasible_error("margins incompatible with the mask");
    } else if (!gale_ryser_feasible(mp)) {
      throw infeasible_error("margins admit no binary matrix");
    }
  }

  // Process columns in decreasing-sum order (stable), or as given.
  std::vector<int> col_order(n);
  std::iota(col_order.begin(), col_order.end(), 0);
  if (opts.sort_columns) {
    std::stable_sort(col_order.begin(), col_order.end(), [&](int a, int b) {
      return mp.col_sums[a] > mp.col_sums[b];
    });
  }
  std::vector<int> csort(n);
  for (int j = 0; j < n; ++j) csort[j] = mp.col_sums[col_order[j]];

  // Per-row forced-zero positions in sorted column space, ascending.
  std::vector<std::vector<int>> zero_pos(m);
  if (mode != MaskMode::none) {
    std::vector<int> to_sorted(n);
    for (int j = 0; j < n; ++j) to_sorted[col_order[j]] = j;
    for (int i = 0; i < m; ++i) {
      for (int j : mask->row_cols[i]) zero_pos[i].push_back(to_sorted[j]);
      std::sort(zero_pos[i].begin(), zero_pos[i].end());
    }
  }

  std::vector<int> residual = mp.row_sums;
  std::vector<int> order(m);
  std::vector<std::uint8_t> b(m);
  double log_q = 0.0;

  MarginPair cur;
  cur.row_sums.resize(m);

  for (int j = 0; j < n; ++j) {
    const int rem = n - j;
    const int c1 = csort[j];

    if (rem == 1) {
      // One column left: it must absorb the residual row sums exactly, with
      // probability one under the proposal.
      for (int i = 0; i < m; ++i) {
        const int v = residual[i];
        if (v < 0 || v > 1)
          throw no_valid_path_error("residual row sum cannot fit one column");
        if (v == 1 && mode != MaskMode::none && mask->forbids(i, col_order[j]))
          throw no_valid_path_error("forced zero blocks the final column");
        if (out && v == 1) out->set(i, col_order[j], 1);
      }
      if (opts.ops) opts.ops->dp_ops += static_cast<std::uint64_t>(m);
      continue;
    }

    // Row order for this column: decreasing residual sums; under an exact
    // mask ties go to the row whose forced zero comes first.
    std::iota(order.begin(), order.end(), 0);
    if (mode == MaskMode::exact) {
      std::sort(order.begin(), order.end(), [&](int a, int bx) {
        if (residual[a] != residual[bx]) return residual[a] > residual[bx];
        const int ya = zero_pos[a].empty() || zero_pos[a][0] < j
                           ? std::numeric_limits<int>::max()
                           : zero_pos[a][0];
        const int yb = zero_pos[bx].empty() || zero_pos[bx][0] < j
                           ? std::numeric_limits<int>::max()
                           : zero_pos[bx][0];
        if (ya != yb) return ya < yb;
        return a < bx;
      });
    } else {
      std::sort(order.begin(), order.end(), [&](int a, int bx) {
        if (residual[a] != residual[bx]) return residual[a] > residual[bx];
        return a < bx;
      });
    }

    for (int k = 0; k < m; ++k) cur.row_sums[k] = residual[order[k]];
    cur.col_sums.assign(csort.begin() + j, csort.end());

    StructuralZeroMask slice;
    const bool masked = mode != MaskMode::none;
    if (masked) {
      slice.m = m;
      slice.n = rem;
      slice.row_cols.assign(m, {});
      for (int k = 0; k < m; ++k) {
        for (int p : zero_pos[order[k]]) {
          if (p >= j) slice.row_cols[k].push_back(p - j);
        }
      }
    }

    BernoulliProfile profile =
        bernoulli_profile(cur, h, masked ? &slice : nullptr);
    if (mode == MaskMode::pinned) {
      // General masks: zeros are enforced through the probabilities alone,
      // so a dead end is possible and reported as no_valid_path_error.
      for (int k = 0; k < m; ++k) {
        if (!slice.row_cols[k].empty() && slice.row_cols[k][0] == 0)
          profile.log_odds[k] = kNegInf;
      }
    }

    const ColumnSupport support =
        mode == MaskMode::exact
            ? detail::first_column_support_sz_unchecked(cur, slice)
            : detail::first_column_support_unchecked(cur);

    const ColumnChainFactors factors =
        build_factors(profile, support, opts.log_factor_shift);
    const ColumnChain chain = backward_pass(factors);
    if (opts.ops)
      opts.ops->dp_ops +=
          4ull * static_cast<std::uint64_t>(m) * (c1 + 1) + m;

    double logp;
    if (sampling) {
      auto [draw, lp] = sample_column(chain, *rng);
      b = std::move(draw);
      logp = lp;
    } else {
      for (int k = 0; k < m; ++k) b[k] = given->at(order[k], col_order[j]);
      logp = eval_column(chain, b);
      if (logp == kNegInf) return kNegInf;
    }
    log_q += logp;

    for (int k = 0; k < m; ++k) {
      if (b[k]) {
        const int i = order[k];
        --residual[i];
        if (out) out->set(i, col_order[j], 1);
      }
    }
  }
  return log_q;
}

}  // namespace

SampledMatrix sample_matrix(const MarginPair& mp, Heuristic h,
                            const StructuralZeroMask* mask, CounterRng& rng,
                            const SamplerOptions& opts) {
  SampledMatrix result;
  result.matrix = BinaryMatrix(mp.rows(), mp.cols());
  result.log_q = run_columns(mp, h, mask, opts, &result.matrix, nullptr, &rng);
  return result;
}

double eval_matrix(const MarginPair& mp, Heuristic h,
                   const StructuralZeroMask* mask, const BinaryMatrix& z,
                   const SamplerOptions& opts) {
  if (z.m != mp.rows() || z.n != mp.cols()) return kNegInf;
  if (z.row_sums() != mp.row_sums || z.col_sums() != mp.col_sums) return kNegInf;
  if (mask != nullptr && !mask->empty() && !mask->satisfied_by(z)) return kNegInf;
  return run_columns(mp, h, mask, opts, nullptr, &z, nullptr);
}

}  // namespace binmat
