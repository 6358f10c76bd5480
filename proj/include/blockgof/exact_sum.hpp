#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

#include "blockgof/errors.hpp"

namespace blockgof {

/// Exact accumulator for finite doubles: every addend is stored without
/// rounding in a wide fixed-point register, and value() rounds the exact
/// total once. The result is therefore independent of summation order.
class ExactSum {
 public:
  void add(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    const unsigned biased = static_cast<unsigned>((bits >> 52) & 0x7ff);
    if (biased == 0x7ff) throw NumericError("non-finite addend in exact sum");
    std::uint64_t mant = bits & ((std::uint64_t{1} << 52) - 1);
    if (mant == 0 && biased == 0) return;
    int pos = 0;  // bit position of the mantissa's lowest bit above 2^-1074
    if (biased != 0) {
      mant |= std::uint64_t{1} << 52;
      pos = static_cast<int>(biased) - 1;
    }
    const int limb = pos >> 5;
    const auto wide = static_cast<unsigned __int128>(mant) << (pos & 31);
    const auto c0 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide));
    const auto c1 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide >> 32));
    const auto c2 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide >> 64));
    if (bits >> 63) {
      limbs_[limb] -= c0;
      limbs_[limb + 1] -= c1;
      limbs_[limb + 2] -= c2;
    } else {
      limbs_[limb] += c0;
      limbs_[limb + 1] += c1;
      limbs_[limb + 2] += c2;
    }
    lo_ = std::min(lo_, limb);
    hi_ = std::max(hi_, limb + 2);
    if (++pending_ == kFlushEvery) normalize();
  }

  /// Adds a * b exactly (split into the rounded product and its error).
  void add_product(double a, double b) {
    const double p = a * b;
    add(p);
    add(std::fma(a, b, -p));
  }

  /// Correctly rounded (to nearest, ties to even) value of the exact sum.
  double value() const {
    ExactSum copy = *this;
    return copy.round();
  }

  void clear() {
    for (int i = lo_; i <= hi_ && lo_ <= hi_; ++i) limbs_[i] = 0;
    lo_ = kLimbs;
    hi_ = -1;
    pending_ = 0;
  }

 private:
  static constexpr int kLimbs = 72;  // 2^-1074 .. beyond 2^1024 in 32-bit digits
  static constexpr int kFlushEvery = 1 << 29;

  // Carries every digit into [0, 2^32); the top digit keeps the sign.
  void normalize() {
    if (hi_ < 0) return;
    for (int i = lo_; i < kLimbs - 1; ++i) {
      const std::int64_t carry = limbs_[i] >> 32;
      limbs_[i] -= carry * (std::int64_t{1} << 32);
      limbs_[i + 1] += carry;
      if (i >= hi_ && carry == 0) break;
      hi_ = std::max(hi_, i + 1);
    }
    pending_ = 0;
  }

  double round() {
    normalize();
    int top = hi_;
    while (top >= 0 && top >= lo_ && limbs_[top] == 0) --top;
    if (top < lo_ || top < 0) return 0.0;
    double sign = 1.0;
    if (limbs_[top] < 0) {
      for (int i = lo_; i <= top; ++i) limbs_[i] = -limbs_[i];
      normalize();
      sign = -1.0;
      top = hi_;
      while (top >= lo_ && limbs_[top] == 0) --top;
    }
    // Top three digits hold at least 65 significant bits; everything below
    // only matters as a sticky bit for rounding.
    const int base = std::max(top - 2, 0);
    unsigned __int128 window = 0;
    for (int i = top; i >= base; --i) window = (window << 32) | static_cast<std::uint32_t>(limbs_[i]);
    bool sticky = false;
    for (int i = lo_; i < base && !sticky; ++i) sticky = limbs_[i] != 0;
    if (sticky) window |= 1;
    return sign * std::ldexp(static_cast<double>(window), 32 * base - 1074);
  }

  std::array<std::int64_t, kLimbs> limbs_{};
  int lo_ = kLimbs;
  int hi_ = -1;
  int pending_ = 0;
};

}  // namespace blockgof
