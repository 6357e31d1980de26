#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "binmat/binary_matrix.hpp"
#include "binmat/dpsampler.hpp"
#include "binmat/margins.hpp"
#include "binmat/rng.hpp"

namespace binmat {

// Summary statistics of a batch of importance weights W_k = 1/Q(Z_k),
// kept in the log domain: the weights themselves routinely exceed the
// double range.
struct WeightSummary {
  std::vector<double> log_weights;
  double delta_hat = 1.0;  // max W / min W; +inf when the spread overflows
  double cv2_hat = 0.0;    // sample variance over squared mean
  double log_mean = 0.0;   // log of the weight average
  double log_se = 0.0;     // log of the standard error of the average; -inf when zero
  std::size_t count() const { return log_weights.size(); }
};

// Computes all derived statistics by max-shifted accumulation. With
// M = max_k u_k and x_k = exp(u_k - M):
//   log_mean = M + log(mean x),
//   s2 = sum (x_k - mean x)^2 / (N-1)   (unbiased sample variance, shifted),
//   cv2_hat = s2 / (mean x)^2,
//   log_se = M + log(s2)/2 - log(N)/2.
// Requires at least two weights.
WeightSummary summarize(std::vector<double> log_weights);

// Draws n_samples matrices (stream k of `seed` for draw k, so the result is
// independent of thread count) and summarizes their log weights. The mean
// weight estimates the number of matrices with these margins.
WeightSummary estimate_count(const MarginPair& mp, Heuristic h,
                             const StructuralZeroMask* mask, int n_samples,
                             std::uint64_t seed, int jobs = 1,
                             const SamplerOptions& opts = {});

// Self-normalized estimator sum f_k W_k / sum W_k, shifted by the max log
// weight before exponentiating.
double estimate_expectation(std::span<const double> log_weights,
                            std::span<const double> f_values);

// Each row independently uniform over its r_i-subsets of n columns. The
// result, conditioned on its own column sums C, is a uniform draw from the
// set of matrices with margins (r, C).
BinaryMatrix uniform_given_rowsums(std::span<const int> r, int n, CounterRng& rng);

struct DeltaMaxResult {
  std::vector<double> per_replicate;  // weight ratio per uniform anchor
  double delta_max = 1.0;
};

// External uniformity check: L uniform anchors; for each, the max/min ratio
// over the anchor's weight plus N proposal weights on the induced margins.
DeltaMaxResult delta_max_experiment(std::span<const int> r, int n, int L,
                                    int N, Heuristic h, std::uint64_t seed);

// Square matrix of disjoint r1 x r1 all-ones blocks; requires m == n and
// r1 | n (shape_error otherwise).
BinaryMatrix adversarial_block(int m, int n, int r1);

// Greedy bottom-fill construction: column by column, place the ones into
// the last rows that still have capacity. May fail; failure is a reportable
// outcome, not an error. Requires non-increasing margins.
std::optional<BinaryMatrix> adversarial_greedy(const MarginPair& mp);

// Weight ratio including an adversarial matrix's weight: log_q_star is the
// proposal log probability of the constructed matrix. Throws if the matrix
// is out of support (log_q_star == -inf).
double delta_star(double log_q_star, std::span<const double> log_weights);

}  // namespace binmat
