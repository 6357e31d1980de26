#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "binmat/dpsampler.hpp"
#include "binmat/errors.hpp"
#include "binmat/oracle.hpp"
#include "test_helpers.hpp"

using binmat::BernoulliProfile;
using binmat::BinaryMatrix;
using binmat::ColumnSupport;
using binmat::CounterRng;
using binmat::Heuristic;
using binmat::MarginPair;
using binmat::StructuralZeroMask;
using test_helpers::margins;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

BernoulliProfile flat_profile(int m, double p) {
  BernoulliProfile prof;
  prof.log_odds.assign(m, std::log(p / (1 - p)));
  return prof;
}

ColumnSupport support_of(MarginPair mp) {
  return binmat::first_column_support(mp);
}

// Support with only the final-sum pin: every value allowed, every window
// maximal. This is the conditional-Bernoulli special case.
ColumnSupport relaxed_support(int m, int c1) {
  ColumnSupport sup;
  sup.allowed.assign(m, 0b11);
  sup.lower.assign(m, 0);
  sup.upper.assign(m, c1);
  sup.lower[m - 1] = c1;
  sup.column_sum = c1;
  return sup;
}

}  // namespace

TEST_CASE("factors for a single pinned Bernoulli") {
  const auto factors =
      binmat::build_factors(flat_profile(1, 0.5), relaxed_support(1, 1));
  CHECK(factors.stay_at(0, 0) == -kInf);  // staying misses the pinned sum
  CHECK(factors.step_at(0, 0) == doctest::Approx(std::log(0.5)));
  const auto chain = binmat::backward_pass(factors);
  CHECK(chain.pi_step(0, 0) == doctest::Approx(0.0));
  CounterRng rng(1, 1);
  const auto [b, logp] = binmat::sample_column(chain, rng);
  CHECK(b == std::vector<std::uint8_t>{1});
  CHECK(logp == doctest::Approx(0.0));
}

TEST_CASE("forbidden value wipes a row of step factors") {
  ColumnSupport sup = relaxed_support(2, 1);
  sup.allowed[0] = 0b01;  // row 0 must be zero
  const auto factors = binmat::build_factors(flat_profile(2, 0.3), sup);
  for (int s = 0; s <= 1; ++s) CHECK(factors.step_at(0, s) == -kInf);
}

TEST_CASE("three equal-weight columns get equal probability") {
  const auto mp = margins({2, 1, 1}, {2, 1, 1});
  const auto chain = binmat::backward_pass(
      binmat::build_factors(flat_profile(3, 0.5), support_of(mp)));

  const std::vector<std::vector<std::uint8_t>> valid{
      {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  for (const auto& b : valid)
    CHECK(binmat::eval_column(chain, b) == doctest::Approx(std::log(1.0 / 3.0)));

  double total = 0;
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<std::uint8_t> b{static_cast<std::uint8_t>(bits & 1),
                                static_cast<std::uint8_t>((bits >> 1) & 1),
                                static_cast<std::uint8_t>((bits >> 2) & 1)};
    const double lp = binmat::eval_column(chain, b);
    const bool is_valid =
        std::find(valid.begin(), valid.end(), b) != valid.end();
    if (is_valid)
      total += std::exp(lp);
    else
      CHECK(lp == -kInf);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("chain with only the sum pin is conditional Bernoulli") {
  CounterRng seed_rng(404, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const int m = 2 + static_cast<int>(seed_rng.next_below(7));
    const int c1 = static_cast<int>(seed_rng.next_below(m + 1));
    BernoulliProfile prof;
    prof.log_odds.resize(m);
    std::vector<double> p(m);
    for (int i = 0; i < m; ++i) {
      p[i] = 0.05 + 0.9 * seed_rng.next_unit();
      prof.log_odds[i] = std::log(p[i] / (1 - p[i]));
    }
    const auto chain =
        binmat::backward_pass(binmat::build_factors(prof, relaxed_support(m, c1)));

    // Exact conditional law by direct enumeration.
    double z = 0;
    std::vector<double> mass(1 << m, 0.0);
    for (int bits = 0; bits < (1 << m); ++bits) {
      int sum = 0;
      double w = 1;
      for (int i = 0; i < m; ++i) {
        const int b = (bits >> i) & 1;
        sum += b;
        w *= b ? p[i] : 1 - p[i];
      }
      if (sum == c1) {
        mass[bits] = w;
        z += w;
      }
    }
    for (int bits = 0; bits < (1 << m); ++bits) {
      std::vector<std::uint8_t> b(m);
      for (int i = 0; i < m; ++i) b[i] = (bits >> i) & 1;
      const double lp = binmat::eval_column(chain, b);
      const double q = lp == -kInf ? 0.0 : std::exp(lp);
      CHECK(std::abs(q - mass[bits] / z) <= 1e-12);
    }
  }
}

TEST_CASE("sampled columns follow the chain law empirically") {
  const auto mp = margins({2, 1, 1}, {2, 1, 1});
  const auto chain = binmat::backward_pass(
      binmat::build_factors(flat_profile(3, 0.5), support_of(mp)));
  std::map<std::vector<std::uint8_t>, int> counts;
  const int n = 30000;
  CounterRng rng(11, 0);
  for (int t = 0; t < n; ++t) {
    auto [b, logp] = binmat::sample_column(chain, rng);
    CHECK(binmat::eval_column(chain, b) == doctest::Approx(logp).epsilon(1e-12));
    ++counts[b];
  }
  CHECK(counts.size() == 3);
  const double expect = n / 3.0;
  const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  for (const auto& [b, c] : counts) CHECK(std::abs(c - expect) < 4 * sigma);
}

TEST_CASE("no-path supports are reported") {
  ColumnSupport sup = relaxed_support(2, 2);
  sup.allowed[0] = 0b01;
  sup.allowed[1] = 0b01;  // nobody can step but the sum is pinned at 2
  CHECK_THROWS_AS(
      binmat::backward_pass(binmat::build_factors(flat_profile(2, 0.5), sup)),
      binmat::no_valid_path_error);
}

TEST_CASE("two-matrix instance splits evenly and reports exact probability") {
  const auto mp = margins({1, 1}, {1, 1});
  int identity = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    CounterRng rng(2, k);
    const auto draw = binmat::sample_matrix(mp, Heuristic::cgm, nullptr, rng);
    CHECK(draw.log_q == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    identity += draw.matrix.at(0, 0);
  }
  const double sigma = std::sqrt(n * 0.25);
  CHECK(std::abs(identity - n / 2.0) < 4 * sigma);
}

TEST_CASE("zero-diagonal 3x3 reaches both derangements") {
  const auto mp = margins({1, 1, 1}, {1, 1, 1});
  const auto mask = StructuralZeroMask::zero_diagonal(3, 3);
  std::map<std::vector<std::uint8_t>, int> seen;
  for (int k = 0; k < 200; ++k) {
    CounterRng rng(31, k);
    const auto draw =
        binmat::sample_matrix(mp, Heuristic::oneil_sz, &mask, rng);
    REQUIRE(mask.satisfied_by(draw.matrix));
    ++seen[draw.matrix.cells];
  }
  CHECK(seen.size() == 2);
  double total = 0;
  for (const auto& z : binmat::enumerate_omega(mp, &mask))
    total += std::exp(binmat::eval_matrix(mp, Heuristic::oneil_sz, &mask, z));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("support and normalization are exact on random instances") {
  CounterRng inst_rng(505, 0);
  const std::vector<Heuristic> plain{Heuristic::cgm, Heuristic::binomial,
                                     Heuristic::gmw, Heuristic::oneil};
  int checked = 0;
  while (checked < 30) {
    const MarginPair mp = test_helpers::random_instance(inst_rng, 4, 4);
    const auto omega = binmat::enumerate_omega(mp);
    REQUIRE_FALSE(omega.empty());
    for (Heuristic h : plain) {
      double total = 0;
      for (const auto& z : omega) {
        const double lq = binmat::eval_matrix(mp, h, nullptr, z);
        REQUIRE(lq > -kInf);  // every target matrix is reachable
        total += std::exp(lq);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Exhaustive scan: nothing outside the target set gets probability.
    const int cells = mp.rows() * mp.cols();
    for (int bits = 0; bits < (1 << cells); ++bits) {
      BinaryMatrix z(mp.rows(), mp.cols());
      for (int t = 0; t < cells; ++t)
        z.cells[t] = static_cast<std::uint8_t>((bits >> t) & 1);
      const bool member =
          z.row_sums() == mp.row_sums && z.col_sums() == mp.col_sums;
      const double lq = binmat::eval_matrix(mp, Heuristic::cgm, nullptr, z);
      CHECK((lq > -kInf) == member);
    }
    ++checked;
  }

  // Masked variant of the same property.
  checked = 0;
  while (checked < 25) {
    const auto [mp, mask] = test_helpers::random_masked_instance(inst_rng, 4, 4);
    const auto omega = binmat::enumerate_omega(mp, &mask);
    REQUIRE_FALSE(omega.empty());
    for (Heuristic h : {Heuristic::cgm_sz, Heuristic::binomial_sz,
                        Heuristic::gmw, Heuristic::oneil_sz}) {
      double total = 0;
      for (const auto& z : omega) {
        const double lq = binmat::eval_matrix(mp, h, &mask, z);
        REQUIRE(lq > -kInf);
        total += std::exp(lq);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
    ++checked;
  }
}

TEST_CASE("evaluation replays sampling exactly") {
  CounterRng inst_rng(606, 0);
  for (int rep = 0; rep < 40; ++rep) {
    const MarginPair mp = test_helpers::random_instance(inst_rng, 5, 5);
    for (Heuristic h : {Heuristic::cgm, Heuristic::binomial, Heuristic::gmw,
                        Heuristic::oneil}) {
      CounterRng rng(707, rep);
      const auto draw = binmat::sample_matrix(mp, h, nullptr, rng);
      CHECK(draw.matrix.row_sums() == mp.row_sums);
      CHECK(draw.matrix.col_sums() == mp.col_sums);
      const double replay = binmat::eval_matrix(mp, h, nullptr, draw.matrix);
      CHECK(replay == doctest::Approx(draw.log_q).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical seeds give identical draws") {
  const auto mp = margins({3, 2, 2, 1}, {3, 2, 2, 1});
  CounterRng a(55, 3), b(55, 3);
  const auto da = binmat::sample_matrix(mp, Heuristic::cgm, nullptr, a);
  const auto db = binmat::sample_matrix(mp, Heuristic::cgm, nullptr, b);
  CHECK(da.matrix == db.matrix);
  CHECK(da.log_q == db.log_q);
}

TEST_CASE("column order can be kept, except under a mask") {
  const auto mp = margins({2, 1, 1}, {1, 2, 1});  // columns not sorted
  binmat::SamplerOptions opts;
  opts.sort_columns = false;
  double total = 0;
  for (const auto& z : binmat::enumerate_omega(mp))
    total += std::exp(binmat::eval_matrix(mp, Heuristic::gmw, nullptr, z, opts));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  const auto mask = StructuralZeroMask::from_positions(3, 3, {{0, 0}});
  CounterRng rng(1, 1);
  CHECK_THROWS_AS(
      binmat::sample_matrix(mp, Heuristic::gmw, &mask, rng, opts),
      binmat::error);
}

TEST_CASE("single-column margins are deterministic") {
  const auto mp = margins({1, 0, 1}, {2});
  CounterRng rng(8, 8);
  const auto draw = binmat::sample_matrix(mp, Heuristic::binomial, nullptr, rng);
  CHECK(draw.log_q == 0.0);
  CHECK(draw.matrix.at(0, 0) == 1);
  CHECK(draw.matrix.at(1, 0) == 0);
  CHECK(draw.matrix.at(2, 0) == 1);
}

TEST_CASE("infeasible margins and dead ends raise distinct errors") {
  CounterRng rng(3, 3);
  CHECK_THROWS_AS(binmat::sample_matrix(margins({3, 1, 1, 1}, {3, 3, 0}),
                                        Heuristic::cgm, nullptr, rng),
                  binmat::infeasible_error);
  // Both cells of the only row are masked: a general (pinned) mask cannot
  // be satisfied and sampling dead-ends.
  const auto mask = StructuralZeroMask::from_positions(1, 2, {{0, 0}, {0, 1}});
  CHECK_THROWS_AS(binmat::sample_matrix(margins({2}, {1, 1}), Heuristic::cgm,
                                        &mask, rng),
                  binmat::no_valid_path_error);
}

TEST_CASE("wrong margins or masked cells evaluate to zero probability") {
  const auto mp = margins({1, 1}, {1, 1});
  BinaryMatrix z(2, 2);
  z.set(0, 0, 1);
  z.set(1, 0, 1);  // column sums (2, 0)
  CHECK(binmat::eval_matrix(mp, Heuristic::cgm, nullptr, z) == -kInf);
  const auto mask = StructuralZeroMask::zero_diagonal(2, 2);
  BinaryMatrix ident(2, 2);
  ident.set(0, 0, 1);
  ident.set(1, 1, 1);
  CHECK(binmat::eval_matrix(mp, Heuristic::cgm, &mask, ident) == -kInf);
}

TEST_CASE("factor rescaling changes nothing observable") {
  CounterRng inst_rng(909, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const MarginPair mp = test_helpers::random_instance(inst_rng, 5, 5);
    binmat::SamplerOptions scaled;
    scaled.log_factor_shift = std::log(1000.0);

    CounterRng r1(12, rep), r2(12, rep);
    const auto plain = binmat::sample_matrix(mp, Heuristic::cgm, nullptr, r1);
    const auto shifted =
        binmat::sample_matrix(mp, Heuristic::cgm, nullptr, r2, scaled);
    CHECK(plain.matrix == shifted.matrix);
    CHECK(std::abs(plain.log_q - shifted.log_q) <= 1e-9);
  }

  // Transition probabilities directly: perturb a fixed factor set.
  const auto mp = margins({2, 1, 1}, {2, 1, 1});
  const auto sup = support_of(mp);
  const auto prof = flat_profile(3, 0.37);
  const auto base = binmat::backward_pass(binmat::build_factors(prof, sup));
  const auto moved =
      binmat::backward_pass(binmat::build_factors(prof, sup, std::log(1000.0)));
  for (std::size_t idx = 0; idx < base.log_pi_stay.size(); ++idx) {
    const double a = base.log_pi_stay[idx], b = moved.log_pi_stay[idx];
    if (a == -kInf || b == -kInf)
      CHECK(a == b);
    else
      CHECK(std::abs(a - b) <= 1e-12);
  }
}

TEST_CASE("operation count scales with rows times total mass") {
  auto ops_for = [](int mdim) {
    MarginPair mp;
    mp.row_sums.assign(mdim, 2);
    mp.col_sums.assign(mdim, 2);
    binmat::OpCounter ops;
    binmat::SamplerOptions opts;
    opts.ops = &ops;
    CounterRng rng(4, 0);
    binmat::sample_matrix(mp, Heuristic::binomial, nullptr, rng, opts);
    return static_cast<double>(ops.dp_ops);
  };
  const double small = ops_for(20);
  const double large = ops_for(40);
  CHECK(large / small == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("sparse-family proposals are uniform on heavy-row-and-column margins") {
  // One heavy row and column, all other sums one: the sparse approximations
  // are exact here, so every draw carries the same probability.
  MarginPair mp;
  mp.row_sums = {8};
  for (int i = 1; i < 10; ++i) mp.row_sums.push_back(1);
  mp.col_sums = {6};
  for (int j = 1; j < 12; ++j) mp.col_sums.push_back(1);
  const double log_n = binmat::pathological_count(8, 6, 10, 12).log_value();

  for (Heuristic h : {Heuristic::gmw, Heuristic::oneil}) {
    for (int k = 0; k < 60; ++k) {
      CounterRng rng(21, k);
      const auto draw = binmat::sample_matrix(mp, h, nullptr, rng);
      CHECK(std::abs(draw.log_q + log_n) <= 1e-9);
    }
  }
}
