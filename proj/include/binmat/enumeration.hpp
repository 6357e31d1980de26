#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "binmat/margins.hpp"
#include "binmat/szero.hpp"

namespace binmat {

// Families of per-row Bernoulli probabilities for the current first column.
// The *_sz variants carry structural-zero corrections and are only
// meaningful when a mask is supplied; the plain variants may also be used
// under a mask, in which case zeros are enforced through the support alone.
// There is no gmw_sz: no structural-zero correction of that family exists,
// so gmw is used as-is under masks.
enum class Heuristic {
  cgm,
  binomial,
  gmw,
  oneil,
  cgm_sz,
  binomial_sz,
  oneil_sz,
};

bool is_sz_variant(Heuristic h);
// The variant to use when a mask is present: cgm -> cgm_sz, binomial ->
// binomial_sz, oneil -> oneil_sz, gmw -> gmw (support-only).
Heuristic masked_variant(Heuristic h);
// Inverse direction, used when a nominal mask turns out to be empty.
Heuristic unmasked_variant(Heuristic h);
const char* heuristic_name(Heuristic h);
Heuristic parse_heuristic(const std::string& name);  // throws binmat::error

// Per-row inclusion probabilities stored as log odds so that values such as
// p = 1e-300 survive; +-inf encode exact one/zero.
struct BernoulliProfile {
  std::vector<double> log_odds;

  int size() const { return static_cast<int>(log_odds.size()); }
  double p(int i) const;
  double log_p(int i) const;
  double log_1mp(int i) const;
};

// Probabilities strictly inside [1e-12, 1-1e-12] for rows whose value is not
// forced, so no matrix in the support gets zero proposal probability.
inline constexpr double kLogOddsClamp = 27.631021115928547;

// Falling-factorial sums [t]_l = sum_i t_i (t_i - 1) ... (t_i - l + 1).
struct FallingSums {
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
  std::int64_t s3 = 0;
  static FallingSums of(std::span<const int> t);
};

// log of the count approximation that is accurate when margins do not vary
// too wildly: inverse binomial times products of per-row/per-column
// binomials times a quadratic variance correction. Degenerate conventions:
// the correction is dropped when the total mass is 0 or m*n. Returns -inf
// for negative entries (so it extends to the shifted margins used by
// taylor_profile); throws domain_error when r_i > n or c_j > m.
double log_ntilde_cgm(const MarginPair& mp);

// log of the sparse-regime approximation: multinomial-style factorial ratio
// with a three-term falling-sum correction. Same conventions as above.
double log_ntilde_gmw(const MarginPair& mp);

// Older sparse approximation (single cross-term exponent); used for
// cross-checks of the oneil profile.
double log_ntilde_oneil(const MarginPair& mp);

// Structural-zero-corrected variants of the dense and single-term sparse
// approximations; used for profile cross-checks under masks.
double log_ntilde_cgm_sz(const MarginPair& mp, const StructuralZeroMask& mask);
double log_ntilde_bender_sz(const MarginPair& mp, const StructuralZeroMask& mask);

// Per-row probabilities for the current first column from the closed-form
// expression of the selected family, honoring every 0/0 := 0 convention.
// Margins must be the current submatrix margins with rows sorted; the mask,
// when given, lives in the same column space.
BernoulliProfile bernoulli_profile(const MarginPair& mp, Heuristic h,
                                   const StructuralZeroMask* mask = nullptr);

// Generic profile from any count approximation via the first-order
// expansion: p_i = Ntilde(r - e_i, c') / (Ntilde(r, c') + Ntilde(r - e_i, c')).
// log_n must evaluate on the shifted (possibly invalid) margins; when both
// evaluations are -inf the row gets p_i = 0.
BernoulliProfile taylor_profile(
    const MarginPair& mp,
    const std::function<double(const MarginPair&)>& log_n);

}  // namespace binmat
