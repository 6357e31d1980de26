#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace binmat {

// Unsigned arbitrary-precision integer, base 1e9 limbs. Exact counts in this
// project reach ~10^206, far past any native type; only the operations the
// counting code needs are provided.
class BigUint {
 public:
  BigUint() = default;  // zero
  explicit BigUint(std::uint64_t v);

  bool is_zero() const { return limbs_.empty(); }

  BigUint& operator+=(const BigUint& other);
  friend BigUint operator+(BigUint a, const BigUint& b) {
    a += b;
    return a;
  }

  BigUint& mul_small(std::uint64_t factor);
  friend BigUint operator*(const BigUint& a, const BigUint& b);

  // Exact division by a small divisor; throws if a remainder is left.
  BigUint& div_small_exact(std::uint64_t divisor);

  std::strong_ordering operator<=>(const BigUint& other) const;
  bool operator==(const BigUint& other) const = default;

  std::string to_string() const;
  int digit_count() const;

  // (mantissa in [1,10), decimal exponent); (0, 0) for zero.
  std::pair<double, int> to_mantissa_exp10() const;

  // Natural log; accumulated in long double so that even ~10^300000-sized
  // values keep ~1e-15 absolute accuracy. -inf for zero.
  double log_natural() const;

  double to_double() const;  // may overflow to +inf

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;  // little-endian, base 1e9
};

BigUint big_factorial(int n);
BigUint big_binomial(int n, int k);  // 0 when k < 0 or k > n or n < 0

}  // namespace binmat
