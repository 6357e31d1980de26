#include "binmat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "binmat/errors.hpp"

namespace binmat {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp overflows past this; larger log spreads are reported as infinite.
constexpr double kMaxLogSpread = 709.0;
}  // namespace

WeightSummary summarize(std::vector<double> log_weights) {
  const std::size_t n = log_weights.size();
  if (n < 2) throw error("summarize requires at least two weights");

  double lo = log_weights[0], hi = log_weights[0];
  for (double u : log_weights) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }

  WeightSummary s;
  const double spread = hi - lo;
  s.delta_hat = spread > kMaxLogSpread
                    ? std::numeric_limits<double>::infinity()
                    : std::exp(spread);

  // Shift by the max so every exponentiated weight is in (0, 1].
  double sum = 0.0;
  for (double u : log_weights) sum += std::exp(u - hi);
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (double u : log_weights) {
    const double d = std::exp(u - hi) - mean;
    ss += d * d;
  }
  const double s2 = ss / static_cast<double>(n - 1);

  s.cv2_hat = s2 == 0.0 ? 0.0 : s2 / (mean * mean);
  s.log_mean = hi + std::log(mean);
  s.log_se = s2 == 0.0
                 ? kNegInf
                 : hi + 0.5 * std::log(s2) - 0.5 * std::log(static_cast<double>(n));
  s.log_weights = std::move(log_weights);
  return s;
}

WeightSummary estimate_count(const MarginPair& mp, Heuristic h,
                             const StructuralZeroMask* mask, int n_samples,
                             std::uint64_t seed, int jobs,
                             const SamplerOptions& opts) {
  if (n_samples < 2) throw error("count estimation needs at least two draws");
  std::vector<double> log_w(static_cast<std::size_t>(n_samples));

  auto worker = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      CounterRng rng(seed, static_cast<std::uint64_t>(k));
      const SampledMatrix draw = sample_matrix(mp, h, mask, rng, opts);
      log_w[static_cast<std::size_t>(k)] = -draw.log_q;
    }
  };

  jobs = std::max(1, std::min(jobs, n_samples));
  if (jobs == 1) {
    worker(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    const int chunk = (n_samples + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const int begin = t * chunk;
      const int end = std::min(n_samples, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, t, begin, end] {
        try {
          worker(begin, end);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  return summarize(std::move(log_w));
}

double estimate_expectation(std::span<const double> log_weights,
                            std::span<const double> f_values) {
  if (log_weights.empty()) throw error("no samples to average");
  if (log_weights.size() != f_values.size())
    throw error("weights and function values differ in length");

  double hi = log_weights[0];
  for (double u : log_weights) hi = std::max(hi, u);

  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < log_weights.size(); ++k) {
    const double w = std::exp(log_weights[k] - hi);
    num += f_values[k] * w;
    den += w;
  }
  return num / den;
}

BinaryMatrix uniform_given_rowsums(std::span<const int> r, int n,
                                   CounterRng& rng) {
  const int m = static_cast<int>(r.size());
  BinaryMatrix z(m, n);
  for (int i = 0; i < m; ++i) {
    if (r[i] < 0 || r[i] > n) throw domain_error("row sum out of range");
    for (int j : sample_index_subset(n, r[i], rng)) z.set(i, j, 1);
  }
  return z;
}

DeltaMaxResult delta_max_experiment(std::span<const int> r, int n, int L,
                                    int N, Heuristic h, std::uint64_t seed) {
  DeltaMaxResult result;
  result.per_replicate.reserve(static_cast<std::size_t>(L));
  result.delta_max = 1.0;

  for (int ell = 0; ell < L; ++ell) {
    // Stream 0 of the pair (seed, replicate) draws the anchor; streams
    // 1..N draw from the proposal on the induced margins.
    const std::uint64_t base = static_cast<std::uint64_t>(ell) << 32;
    CounterRng anchor_rng(seed, base);
    const BinaryMatrix anchor = uniform_given_rowsums(r, n, anchor_rng);

    MarginPair mp;
    mp.row_sums.assign(r.begin(), r.end());
    mp.col_sums = anchor.col_sums();

    const double log_q0 = eval_matrix(mp, h, nullptr, anchor);
    if (log_q0 == kNegInf)
      throw no_valid_path_error("uniform anchor fell outside the proposal support");

    double lo = -log_q0, hi = -log_q0;
    for (int k = 1; k <= N; ++k) {
      CounterRng rng(seed, base | static_cast<std::uint64_t>(k));
      const SampledMatrix draw = sample_matrix(mp, h, nullptr, rng);
      lo = std::min(lo, -draw.log_q);
      hi = std::max(hi, -draw.log_q);
    }
    const double spread = hi - lo;
    const double delta = spread > kMaxLogSpread
                             ? std::numeric_limits<double>::infinity()
                             : std::exp(spread);
    result.per_replicate.push_back(delta);
    result.delta_max = std::max(result.delta_max, delta);
  }
  return result;
}

BinaryMatrix adversarial_block(int m, int n, int r1) {
  if (m != n) throw shape_error("block construction needs a square matrix");
  if (r1 < 1 || n % r1 != 0) throw shape_error("block size must divide n");
  BinaryMatrix z(m, n);
  for (int i = 0; i < m; ++i) {
    const int block = i / r1;
    for (int j = block * r1; j < (block + 1) * r1; ++j) z.set(i, j, 1);
  }
  return z;
}

std::optional<BinaryMatrix> adversarial_greedy(const MarginPair& mp) {
  const int m = mp.rows();
  const int n = mp.cols();
  if (!std::is_sorted(mp.row_sums.begin(), mp.row_sums.end(), std::greater<int>()) ||
      !std::is_sorted(mp.col_sums.begin(), mp.col_sums.end(), std::greater<int>()))
    throw shape_error("greedy construction expects non-increasing margins");

  BinaryMatrix z(m, n);
  std::vector<int> used(m, 0);
  for (int j = 0; j < n; ++j) {
    int need = mp.col_sums[j];
    for (int i = m - 1; i >= 0 && need > 0; --i) {
      if (used[i] < mp.row_sums[i]) {
        z.set(i, j, 1);
        ++used[i];
        --need;
      }
    }
    if (need > 0) return std::nullopt;  // column could not be filled
  }
  if (used != mp.row_sums) return std::nullopt;
  return z;
}

double delta_star(double log_q_star, std::span<const double> log_weights) {
  if (log_q_star == kNegInf)
    throw no_valid_path_error("adversarial matrix is outside the proposal support");
  double lo = -log_q_star, hi = -log_q_star;
  for (double u : log_weights) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  const double spread = hi - lo;
  return spread > kMaxLogSpread ? std::numeric_limits<double>::infinity()
                                : std::exp(spread);
}

}  // namespace binmat
