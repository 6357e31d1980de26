#include "binmat/bigint.hpp"

#include <cmath>
#include <cstdio>

#include "binmat/errors.hpp"

namespace binmat {

namespace {
constexpr std::uint64_t kBase = 1000000000ULL;  // 1e9
}

BigUint::BigUint(std::uint64_t v) {
  while (v > 0) {
    limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
    v /= kBase;
  }
}

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& other) {
  const std::size_t n = std::max(limbs_.size(), other.limbs_.size());
  limbs_.resize(n, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = carry + limbs_[i];
    if (i < other.limbs_.size()) s += other.limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(s % kBase);
    carry = s / kBase;
  }
  if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  return *this;
}

BigUint& BigUint::mul_small(std::uint64_t factor) {
  if (factor == 0 || is_zero()) {
    limbs_.clear();
    return *this;
  }
  // Keep factor * limb + carry within uint64: split large factors.
  if (factor >= kBase) {
    BigUint f(factor);
    *this = *this * f;
    return *this;
  }
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t v = factor * limb + carry;
    limb = static_cast<std::uint32_t>(v % kBase);
    carry = v / kBase;
  }
  while (carry) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
    carry /= kBase;
  }
  return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
  BigUint out;
  if (a.is_zero() || b.is_zero()) return out;
  out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    const std::uint64_t ai = a.limbs_[i];
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      const std::uint64_t v = out.limbs_[i + j] + ai * b.limbs_[j] + carry;
      out.limbs_[i + j] = static_cast<std::uint32_t>(v % kBase);
      carry = v / kBase;
    }
    std::size_t k = i + b.limbs_.size();
    while (carry) {
      const std::uint64_t v = out.limbs_[k] + carry;
      out.limbs_[k] = static_cast<std::uint32_t>(v % kBase);
      carry = v / kBase;
      ++k;
    }
  }
  out.trim();
  return out;
}

BigUint& BigUint::div_small_exact(std::uint64_t divisor) {
  if (divisor == 0) throw error("division by zero");
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    const std::uint64_t cur = rem * kBase + limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / divisor);
    rem = cur % divisor;
  }
  if (rem != 0) throw error("inexact small division");
  trim();
  return *this;
}

std::strong_ordering BigUint::operator<=>(const BigUint& other) const {
  if (limbs_.size() != other.limbs_.size())
    return limbs_.size() <=> other.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::string BigUint::to_string() const {
  if (is_zero()) return "0";
  std::string out = std::to_string(limbs_.back());
  char buf[16];
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::snprintf(buf, sizeof buf, "%09u", limbs_[i]);
    out += buf;
  }
  return out;
}

int BigUint::digit_count() const {
  if (is_zero()) return 1;
  int d = 9 * static_cast<int>(limbs_.size() - 1);
  std::uint32_t top = limbs_.back();
  while (top > 0) {
    ++d;
    top /= 10;
  }
  return d;
}

std::pair<double, int> BigUint::to_mantissa_exp10() const {
  if (is_zero()) return {0.0, 0};
  const std::string s = to_string();
  const int take = std::min<int>(17, static_cast<int>(s.size()));
  double mant = 0.0;
  for (int i = 0; i < take; ++i) mant = mant * 10.0 + (s[i] - '0');
  mant /= std::pow(10.0, take - 1);
  return {mant, static_cast<int>(s.size()) - 1};
}

double BigUint::log_natural() const {
  if (is_zero()) return -HUGE_VAL;
  // Two top limbs give an exact 64-bit mantissa; the rest contribute a
  // power of the limb base.
  long double mant = limbs_.back();
  int dropped = static_cast<int>(limbs_.size()) - 1;
  if (limbs_.size() >= 2) {
    mant = mant * static_cast<long double>(kBase) + limbs_[limbs_.size() - 2];
    dropped -= 1;
  }
  const long double log_base = logl(static_cast<long double>(kBase));
  return static_cast<double>(logl(mant) + dropped * log_base);
}

double BigUint::to_double() const {
  double v = 0.0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    v = v * static_cast<double>(kBase) + static_cast<double>(limbs_[i]);
  }
  return v;
}

BigUint big_factorial(int n) {
  BigUint out(1);
  for (int i = 2; i <= n; ++i) out.mul_small(static_cast<std::uint64_t>(i));
  return out;
}

BigUint big_binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return BigUint();
  if (k > n - k) k = n - k;
  BigUint out(1);
  // Multiply-then-divide keeps every intermediate an exact integer:
  // after step i the value is C(n-k+i, i).
  for (int i = 1; i <= k; ++i) {
    out.mul_small(static_cast<std::uint64_t>(n - k + i));
    out.div_small_exact(static_cast<std::uint64_t>(i));
  }
  return out;
}

}  // namespace binmat
