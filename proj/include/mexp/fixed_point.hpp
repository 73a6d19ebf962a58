#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "mexp/bigint.hpp"

namespace mexp {

/// Fractional part of alpha as value / 2^frac_bits, plus floor(alpha).
///
/// The phase kernels work on `limbs()`: the value left-aligned in
/// ceil(frac_bits / 64) little-endian 64-bit words, so the top word of
/// n * limbs (mod 2^(64 L)) is the leading 64 bits of {n alpha}.
class FixedPointAlpha {
 public:
  static constexpr int kDefaultFracBits = 256;
  static constexpr int kMaxLimbs = 64;

  FixedPointAlpha(BigInt integer_part, BigInt value, int frac_bits);

  /// Fixture helper: {num/den} rounded to the nearest multiple of 2^-frac_bits.
  static FixedPointAlpha from_fraction(const BigInt& num, const BigInt& den, int frac_bits = kDefaultFracBits);

  int frac_bits() const { return frac_bits_; }
  const BigInt& value() const { return value_; }
  const BigInt& integer_part() const { return integer_part_; }
  std::span<const std::uint64_t> limbs() const { return {limbs_.data(), limb_count_}; }
  std::size_t limb_count() const { return limb_count_; }
  /// False for precisions beyond kMaxLimbs words; such values only serve
  /// interval checks, never phase evaluation.
  bool phase_capable() const { return limb_count_ > 0; }

  /// Re-rounded to fewer fractional bits (|alpha - value/2^F| stays below 2^-F).
  FixedPointAlpha rounded_to(int frac_bits) const;

  /// The fixed point encoding of -alpha, i.e. {1 - alpha} for irrational alpha.
  FixedPointAlpha negated() const;

  /// alpha + shift (integer), same fractional part.
  FixedPointAlpha shifted(const BigInt& shift) const;

  /// Approximate {alpha} as a double.
  double fraction() const;

  /// Largest n accepted by the phase guard n * 2^-frac_bits < 2^-64.
  std::uint64_t max_phase_multiplier() const;

 private:
  int frac_bits_;
  BigInt value_;
  BigInt integer_part_;
  std::array<std::uint64_t, kMaxLimbs> limbs_{};
  std::size_t limb_count_ = 0;
};

/// Throws PrecisionError when n violates the guard of `alpha`.
void check_phase_guard(const FixedPointAlpha& alpha, std::uint64_t n);

/// {n alpha} in [0, 1), computed in integer fixed point.
double phase(const FixedPointAlpha& alpha, std::uint64_t n);

/// Signed reduced phase of n alpha, in [-1/2, 1/2), from the top 128 bits.
double signed_phase(const FixedPointAlpha& alpha, std::uint64_t n);

/// ||n alpha||: distance to the nearest integer.
inline double dist_to_int(double signed_ph) { return signed_ph < 0 ? -signed_ph : signed_ph; }

}  // namespace mexp
