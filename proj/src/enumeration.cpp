#include "binmat/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "binmat/errors.hpp"

namespace binmat {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__linux__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // avoids the signgam global under threads
#else
  return std::lgamma(x);
#endif
}

double lchoose(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return kNegInf;
  return log_gamma(static_cast<double>(n + 1)) -
         log_gamma(static_cast<double>(k + 1)) -
         log_gamma(static_cast<double>(n - k + 1));
}

double log_factorial(int v) { return log_gamma(static_cast<double>(v) + 1.0); }

// Margins where a binomial-product approximation vanishes: a negative entry
// or an entry exceeding the other dimension zeroes some binomial factor.
// Such margins arise legitimately when the expansion shifts a full row, so
// they yield log 0 rather than an error.
bool binomial_family_vanishes(const MarginPair& mp) {
  for (int v : mp.row_sums)
    if (v < 0 || v > mp.cols()) return true;
  for (int v : mp.col_sums)
    if (v < 0 || v > mp.rows()) return true;
  return false;
}

// The factorial-based approximations vanish only at negative entries (a
// reciprocal gamma pole); an overfull row still gets a positive value, and
// the expansion relies on that.
bool factorial_family_vanishes(const MarginPair& mp) {
  for (int v : mp.row_sums)
    if (v < 0) return true;
  for (int v : mp.col_sums)
    if (v < 0) return true;
  return false;
}

struct Alpha {
  double a1 = 0, a2 = 0, a3 = 0;
};

// Correction coefficients of the sparse-regime approximation, as functions
// of the column falling sums; all zero when the mass vanishes (0/0 := 0).
Alpha alpha_coefficients(const FallingSums& fc) {
  Alpha a;
  if (fc.s1 == 0) return a;
  const double s = static_cast<double>(fc.s1);
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double c2 = static_cast<double>(fc.s2);
  const double c3 = static_cast<double>(fc.s3);
  a.a1 = c2 / (2 * s2) + c2 / (2 * s3) + c2 * c2 / (4 * s4);
  a.a2 = -c3 / (3 * s3) + c2 * c2 / (2 * s4);
  a.a3 = c2 / (4 * s4) + c3 / (2 * s4) - c2 * c2 / (2 * s5);
  return a;
}

double squared_deviation_sum(std::span<const int> t, double mean) {
  double acc = 0;
  for (int v : t) {
    const double d = static_cast<double>(v) - mean;
    acc += d * d;
  }
  return acc;
}

}  // namespace

FallingSums FallingSums::of(std::span<const int> t) {
  FallingSums f;
  for (int v : t) {
    const std::int64_t x = v;
    f.s1 += x;
    f.s2 += x * (x - 1);
    f.s3 += x * (x - 1) * (x - 2);
  }
  return f;
}

bool is_sz_variant(Heuristic h) {
  return h == Heuristic::cgm_sz || h == Heuristic::binomial_sz ||
         h == Heuristic::oneil_sz;
}

Heuristic masked_variant(Heuristic h) {
  switch (h) {
    case Heuristic::cgm:
      return Heuristic::cgm_sz;
    case Heuristic::binomial:
      return Heuristic::binomial_sz;
    case Heuristic::oneil:
      return Heuristic::oneil_sz;
    default:
      return h;  // gmw has no corrected form; sz variants stay put
  }
}

Heuristic unmasked_variant(Heuristic h) {
  switch (h) {
    case Heuristic::cgm_sz:
      return Heuristic::cgm;
    case Heuristic::binomial_sz:
      return Heuristic::binomial;
    case Heuristic::oneil_sz:
      return Heuristic::oneil;
    default:
      return h;
  }
}

const char* heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::cgm:
      return "cgm";
    case Heuristic::binomial:
      return "binomial";
    case Heuristic::gmw:
      return "gmw";
    case Heuristic::oneil:
      return "oneil";
    case Heuristic::cgm_sz:
      return "cgm_sz";
    case Heuristic::binomial_sz:
      return "binomial_sz";
    case Heuristic::oneil_sz:
      return "oneil_sz";
  }
  return "?";
}

Heuristic parse_heuristic(const std::string& name) {
  for (Heuristic h :
       {Heuristic::cgm, Heuristic::binomial, Heuristic::gmw, Heuristic::oneil,
        Heuristic::cgm_sz, Heuristic::binomial_sz, Heuristic::oneil_sz}) {
    if (name == heuristic_name(h)) return h;
  }
  throw error("unknown heuristic: " + name);
}

double BernoulliProfile::p(int i) const {
  const double t = log_odds[i];
  if (t == kPosInf) return 1.0;
  if (t == kNegInf) return 0.0;
  return 1.0 / (1.0 + std::exp(-t));
}

double BernoulliProfile::log_p(int i) const {
  const double t = log_odds[i];
  if (t == kPosInf) return 0.0;
  if (t == kNegInf) return kNegInf;
  return t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

double BernoulliProfile::log_1mp(int i) const {
  const double t = log_odds[i];
  if (t == kPosInf) return kNegInf;
  if (t == kNegInf) return 0.0;
  return t >= 0 ? -t - std::log1p(std::exp(-t)) : -std::log1p(std::exp(t));
}

double log_ntilde_cgm(const MarginPair& mp) {
  if (binomial_family_vanishes(mp)) return kNegInf;
  const int m = mp.rows();
  const int n = mp.cols();
  const std::int64_t cells = static_cast<std::int64_t>(m) * n;
  const std::int64_t mass = mp.total_col_sum();

  double value = -lchoose(cells, mass);
  for (int r : mp.row_sums) value += lchoose(n, r);
  for (int c : mp.col_sums) value += lchoose(m, c);

  // Fully empty or fully packed: the variance correction is 0/0 and the
  // combinatorial part is already exact, so the correction is dropped.
  if (mass == 0 || mass == cells) return value;

  const double denom = static_cast<double>(mass) * static_cast<double>(cells - mass);
  const double scale = static_cast<double>(cells) / denom;
  const double mu =
      scale * squared_deviation_sum(mp.row_sums,
                                    static_cast<double>(mass) / m);
  const double nu =
      scale * squared_deviation_sum(mp.col_sums,
                                    static_cast<double>(mass) / n);
  return value - 0.5 * (1.0 - mu) * (1.0 - nu);
}

double log_ntilde_gmw(const MarginPair& mp) {
  if (factorial_family_vanishes(mp)) return kNegInf;
  const std::int64_t mass = mp.total_col_sum();

  double value = log_gamma(static_cast<double>(mass) + 1.0);
  for (int r : mp.row_sums) value -= log_factorial(r);
  for (int c : mp.col_sums) value -= log_factorial(c);
  if (mass == 0) return value;

  const FallingSums fc = FallingSums::of(mp.col_sums);
  const FallingSums fr = FallingSums::of(mp.row_sums);
  const Alpha a = alpha_coefficients(fc);
  const double r2 = static_cast<double>(fr.s2);
  const double r3 = static_cast<double>(fr.s3);
  return value - a.a1 * r2 - a.a2 * r3 - a.a3 * r2 * r2;
}

double log_ntilde_oneil(const MarginPair& mp) {
  if (factorial_family_vanishes(mp)) return kNegInf;
  const std::int64_t mass = mp.total_col_sum();

  double value = log_gamma(static_cast<double>(mass) + 1.0);
  for (int r : mp.row_sums) value -= log_factorial(r);
  for (int c : mp.col_sums) value -= log_factorial(c);
  if (mass == 0) return value;

  const FallingSums fc = FallingSums::of(mp.col_sums);
  const FallingSums fr = FallingSums::of(mp.row_sums);
  const double s = static_cast<double>(mass);
  return value - static_cast<double>(fr.s2) * static_cast<double>(fc.s2) /
                     (2.0 * s * s);
}

double log_ntilde_cgm_sz(const MarginPair& mp, const StructuralZeroMask& mask) {
  if (binomial_family_vanishes(mp)) return kNegInf;
  const int m = mp.rows();
  const int n = mp.cols();
  const std::vector<int> xi = mask.xi();
  const std::vector<int> zeta = mask.zeta();
  std::int64_t zeros = 0;
  for (int z : zeta) zeros += z;

  const std::int64_t cells = static_cast<std::int64_t>(m) * n;
  const std::int64_t mass = mp.total_col_sum();

  if (mass > cells - zeros) return kNegInf;
  double value = -lchoose(cells - zeros, mass);
  for (int i = 0; i < m; ++i) value += lchoose(n - xi[i], mp.row_sums[i]);
  for (int j = 0; j < n; ++j) value += lchoose(m - zeta[j], mp.col_sums[j]);
  if (mass == 0 || mass == cells) return value;

  const double denom = static_cast<double>(mass) * static_cast<double>(cells - mass);
  const double scale = static_cast<double>(cells) / denom;
  const double row_mean = static_cast<double>(mass) / m;
  const double col_mean = static_cast<double>(mass) / n;
  const double mu = scale * squared_deviation_sum(mp.row_sums, row_mean);
  const double nu = scale * squared_deviation_sum(mp.col_sums, col_mean);
  double eta = 0;
  for (int i = 0; i < m; ++i) {
    for (int j : mask.row_cols[i]) {
      eta += (mp.row_sums[i] - row_mean) * (mp.col_sums[j] - col_mean);
    }
  }
  eta *= scale;
  return value - 0.5 * (1.0 - mu) * (1.0 - nu) - eta;
}

double log_ntilde_bender_sz(const MarginPair& mp, const StructuralZeroMask& mask) {
  if (factorial_family_vanishes(mp)) return kNegInf;
  const std::int64_t mass = mp.total_col_sum();

  double value = log_gamma(static_cast<double>(mass) + 1.0);
  for (int r : mp.row_sums) value -= log_factorial(r);
  for (int c : mp.col_sums) value -= log_factorial(c);
  if (mass == 0) return value;

  const FallingSums fc = FallingSums::of(mp.col_sums);
  const FallingSums fr = FallingSums::of(mp.row_sums);
  const double s = static_cast<double>(mass);
  double cross = 0;
  for (int i = 0; i < mp.rows(); ++i) {
    for (int j : mask.row_cols[i]) {
      cross += static_cast<double>(mp.row_sums[i]) * mp.col_sums[j];
    }
  }
  return value -
         static_cast<double>(fr.s2) * static_cast<double>(fc.s2) / (2.0 * s * s) -
         cross / s;
}

BernoulliProfile bernoulli_profile(const MarginPair& mp, Heuristic h,
                                   const StructuralZeroMask* mask) {
  const int m = mp.rows();
  const int n = mp.cols();
  if (is_sz_variant(h) && mask == nullptr)
    throw error("structural-zero heuristic requires a mask");

  const std::span<const int> cprime(
      mp.col_sums.data() + 1, static_cast<std::size_t>(std::max(0, n - 1)));
  const FallingSums fcp = FallingSums::of(cprime);
  const std::int64_t s_prime = fcp.s1;
  const std::int64_t s_full = mp.total_col_sum();

  // Shared pieces of the dense-family profile.
  const std::int64_t nn = static_cast<std::int64_t>(m) * (n - 1);
  const double denom_prime =
      static_cast<double>(s_prime) * static_cast<double>(nn - s_prime);
  double beta = 0.0;
  if (denom_prime != 0.0) {
    const double nu_prime =
        (static_cast<double>(nn) / denom_prime) *
        squared_deviation_sum(cprime, static_cast<double>(s_prime) / (n - 1));
    beta = static_cast<double>(nn) * (1.0 - nu_prime) / (2.0 * denom_prime);
  }

  const Alpha alpha = alpha_coefficients(fcp);
  const double oneil_t =
      s_prime == 0 ? 0.0
                   : static_cast<double>(fcp.s2) /
                         (static_cast<double>(s_prime) * static_cast<double>(s_prime));
  const FallingSums fr = FallingSums::of(mp.row_sums);

  BernoulliProfile prof;
  prof.log_odds.resize(m);

  for (int i = 0; i < m; ++i) {
    const int r = mp.row_sums[i];
    // Zeros in the columns that remain after the current one. The factored
    // per-row functions are evaluated at the reduced mask, so a zero sitting
    // in the current column must not count: otherwise a row forced to zero
    // here could get p = 1 exactly and kill its only allowed transition.
    int xi_rem = 0;
    bool zero_here = false;
    if (mask) {
      for (int j : mask->row_cols[i]) {
        if (j == 0)
          zero_here = true;
        else
          ++xi_rem;
      }
    }

    double theta;
    if (r <= 0) {
      theta = kNegInf;
    } else {
      switch (h) {
        case Heuristic::binomial:
          theta = std::log(static_cast<double>(r)) -
                  std::log(static_cast<double>(n - r));
          break;
        case Heuristic::binomial_sz: {
          const int free_slots = n - xi_rem - r;
          theta = free_slots <= 0
                      ? kPosInf
                      : std::log(static_cast<double>(r)) -
                            std::log(static_cast<double>(free_slots));
          break;
        }
        case Heuristic::cgm:
        case Heuristic::cgm_sz: {
          const double centered =
              1.0 - 2.0 * (static_cast<double>(r) -
                           static_cast<double>(s_prime) / m);
          double delta = 0.0;
          int free_slots = n - r;
          if (h == Heuristic::cgm_sz) {
            free_slots = n - xi_rem - r;
            if (denom_prime != 0.0) {
              const double coeff =
                  static_cast<double>(nn) / (2.0 * denom_prime);
              for (int j : mask->row_cols[i]) {
                if (j >= 1)
                  delta += coeff * (static_cast<double>(mp.col_sums[j]) -
                                    static_cast<double>(s_prime) / (n - 1));
              }
            }
          }
          theta = free_slots <= 0
                      ? kPosInf
                      : std::log(static_cast<double>(r)) + beta * centered +
                            delta - std::log(static_cast<double>(free_slots));
          break;
        }
        case Heuristic::gmw: {
          const double gamma =
              2.0 * alpha.a1 + 3.0 * alpha.a2 * (r - 2) +
              4.0 * alpha.a3 * (static_cast<double>(fr.s2) - r + 1);
          theta = std::log(static_cast<double>(r)) + gamma * (r - 1);
          break;
        }
        case Heuristic::oneil:
        case Heuristic::oneil_sz: {
          double corr = 0.0;
          if (h == Heuristic::oneil_sz && s_full != 0) {
            for (int j : mask->row_cols[i]) {
              if (j >= 1)
                corr += static_cast<double>(mp.col_sums[j]) /
                        static_cast<double>(s_full);
            }
          }
          theta = std::log(static_cast<double>(r)) + (r - 1) * oneil_t + corr;
          break;
        }
        default:
          theta = kNegInf;
      }
    }

    // Rows whose value is not forced must keep both outcomes possible.
    const bool interior =
        mask ? (!zero_here && r > 0 && r < n - xi_rem) : (r > 0 && r < n);
    if (interior) theta = std::clamp(theta, -kLogOddsClamp, kLogOddsClamp);
    prof.log_odds[i] = theta;
  }
  return prof;
}

BernoulliProfile taylor_profile(
    const MarginPair& mp,
    const std::function<double(const MarginPair&)>& log_n) {
  const int m = mp.rows();
  const int n = mp.cols();

  MarginPair shifted;
  shifted.row_sums = mp.row_sums;
  shifted.col_sums.assign(mp.col_sums.begin() + 1, mp.col_sums.end());

  const double base = log_n(shifted);
  BernoulliProfile prof;
  prof.log_odds.resize(m);
  for (int i = 0; i < m; ++i) {
    shifted.row_sums[i] -= 1;
    const double dropped = log_n(shifted);
    shifted.row_sums[i] += 1;

    double theta;
    if (dropped == kNegInf) {
      theta = kNegInf;  // includes the 0/0 case: both approximations vanish
    } else if (base == kNegInf) {
      theta = kPosInf;
    } else {
      theta = dropped - base;
    }
    const int r = mp.row_sums[i];
    if (r > 0 && r < n) theta = std::clamp(theta, -kLogOddsClamp, kLogOddsClamp);
    prof.log_odds[i] = theta;
  }
  return prof;
}

}  // namespace binmat
