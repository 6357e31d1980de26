#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "binmat/binary_matrix.hpp"
#include "binmat/enumeration.hpp"
#include "binmat/margins.hpp"
#include "binmat/rng.hpp"
#include "binmat/szero.hpp"

namespace binmat {

// Log-domain chain factors for one column. The partial sum after row i can
// either stay or step by one, so each stage is a (c1+1) x 2 table: entry
// [i][s] holds the weight of the transition from partial sum s before row i.
struct ColumnChainFactors {
  int m = 0;
  int c1 = 0;
  std::vector<double> stay;  // log(1-p_i) where allowed, else -inf
  std::vector<double> step;  // log(p_i) where allowed, else -inf

  int width() const { return c1 + 1; }
  double stay_at(int i, int s) const { return stay[static_cast<std::size_t>(i) * width() + s]; }
  double step_at(int i, int s) const { return step[static_cast<std::size_t>(i) * width() + s]; }
};

// Backward messages and the normalized transition probabilities they induce.
struct ColumnChain {
  int m = 0;
  int c1 = 0;
  std::vector<double> log_beta_stay;
  std::vector<double> log_beta_step;
  std::vector<double> log_pi_stay;
  std::vector<double> log_pi_step;

  int width() const { return c1 + 1; }
  double pi_stay(int i, int s) const { return log_pi_stay[static_cast<std::size_t>(i) * width() + s]; }
  double pi_step(int i, int s) const { return log_pi_step[static_cast<std::size_t>(i) * width() + s]; }
};

struct OpCounter {
  std::uint64_t dp_ops = 0;
};

struct SamplerOptions {
  // Columns are processed in order of decreasing column sums by default;
  // mandatory whenever a mask is present.
  bool sort_columns = true;
  // Constant added to every finite log factor (a uniform rescaling of each
  // stage). The chain is invariant to it; exists to exercise exactly that.
  double log_factor_shift = 0.0;
  OpCounter* ops = nullptr;
};

// A sampled matrix together with the exact log probability the proposal
// assigned to it.
struct SampledMatrix {
  BinaryMatrix matrix;
  double log_q = 0.0;
};

ColumnChainFactors build_factors(const BernoulliProfile& profile,
                                 const ColumnSupport& support,
                                 double log_shift = 0.0);

// Backward recursion with per-stage max rescaling; throws
// no_valid_path_error when no route from partial sum 0 to c1 exists.
ColumnChain backward_pass(const ColumnChainFactors& factors);

// Draws one column by walking the chain forward; returns the 0/1 column and
// its log probability. Every draw lies in the support.
std::pair<std::vector<std::uint8_t>, double> sample_column(const ColumnChain& chain,
                                                           CounterRng& rng);

// Log probability the chain assigns to a given column; -inf out of support.
double eval_column(const ColumnChain& chain, std::span<const std::uint8_t> b);

// Draws a full matrix column by column: rows are re-sorted before every
// column, the profile and support are rebuilt from the residual margins, and
// the per-column log probabilities accumulate into log_q. The output is in
// the original row and column order. Cost is O(m * total mass) in DP
// operations. Throws infeasible_error / no_valid_path_error.
SampledMatrix sample_matrix(const MarginPair& mp, Heuristic h,
                            const StructuralZeroMask* mask, CounterRng& rng,
                            const SamplerOptions& opts = {});

// Deterministic replay of the same recursion along the columns of z;
// returns the log_q that sample_matrix would have recorded had it drawn z,
// or -inf when z is outside the proposal's support (wrong margins, mask
// violation, or a forbidden transition).
double eval_matrix(const MarginPair& mp, Heuristic h,
                   const StructuralZeroMask* mask, const BinaryMatrix& z,
                   const SamplerOptions& opts = {});

}  // namespace binmat
