#include "mexp/fixed_point.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mexp/errors.hpp"
#include "mexp/phase_walker.hpp"

namespace mexp {

double big_log(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

FixedPointAlpha::FixedPointAlpha(BigInt integer_part, BigInt value, int frac_bits)
    : frac_bits_(frac_bits), value_(std::move(value)), integer_part_(std::move(integer_part)) {
  if (frac_bits < 64) throw ConfigError("fixed-point alpha needs at least 64 fractional bits");
  if (sgn(value_) < 0 || (sgn(value_) > 0 && mpz_sizeinbase(value_.get_mpz_t(), 2) > static_cast<std::size_t>(frac_bits)))
    throw InvariantError("fixed-point value outside [0, 2^frac_bits)");
  const auto words = static_cast<std::size_t>((frac_bits + 63) / 64);
  if (words > kMaxLimbs) return;
  limb_count_ = words;
  BigInt aligned = value_ << static_cast<mp_bitcnt_t>(limb_count_ * 64 - static_cast<std::size_t>(frac_bits));
  std::size_t written = 0;
  mpz_export(limbs_.data(), &written, -1, sizeof(std::uint64_t), 0, 0, aligned.get_mpz_t());
}

FixedPointAlpha FixedPointAlpha::from_fraction(const BigInt& num, const BigInt& den, int frac_bits) {
  if (den <= 0) throw ConfigError("fraction needs a positive denominator");
  BigInt ip;
  mpz_fdiv_q(ip.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const BigInt rem = num - ip * den;
  // round(rem * 2^F / den)
  BigInt scaled = (rem << static_cast<mp_bitcnt_t>(frac_bits + 1)) + den;
  BigInt v;
  mpz_fdiv_q(v.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  v >>= 1;
  if (v == big_pow2(static_cast<std::uint64_t>(frac_bits))) {
    v = 0;
    ip += 1;
  }
  return FixedPointAlpha(ip, v, frac_bits);
}

FixedPointAlpha FixedPointAlpha::rounded_to(int frac_bits) const {
  if (frac_bits >= frac_bits_) return *this;
  // round half up by shifting; no division at any size
  const auto drop = static_cast<mp_bitcnt_t>(frac_bits_ - frac_bits);
  BigInt v = (value_ + (BigInt(1) << (drop - 1))) >> drop;
  BigInt ip = integer_part_;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > static_cast<std::size_t>(frac_bits)) {
    v = 0;
    ip += 1;
  }
  return FixedPointAlpha(std::move(ip), std::move(v), frac_bits);
}

FixedPointAlpha FixedPointAlpha::negated() const {
  if (value_ == 0) return FixedPointAlpha(-integer_part_, 0, frac_bits_);
  return FixedPointAlpha(-integer_part_ - 1, big_pow2(static_cast<std::uint64_t>(frac_bits_)) - value_, frac_bits_);
}

FixedPointAlpha FixedPointAlpha::shifted(const BigInt& shift) const {
  return FixedPointAlpha(integer_part_ + shift, value_, frac_bits_);
}

double FixedPointAlpha::fraction() const {
  if (!phase_capable()) return big_to_double(BigInt(value_ >> static_cast<mp_bitcnt_t>(frac_bits_ - 64))) * 0x1p-64;
  return static_cast<double>(limbs_[limb_count_ - 1]) * 0x1p-64 +
         (limb_count_ > 1 ? static_cast<double>(limbs_[limb_count_ - 2]) * 0x1p-128 : 0.0);
}

std::uint64_t FixedPointAlpha::max_phase_multiplier() const {
  const int slack = frac_bits_ - 64;
  if (slack >= 64) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << slack) - 1;
}

void check_phase_guard(const FixedPointAlpha& alpha, std::uint64_t n) {
  if (!alpha.phase_capable())
    throw CapacityError("phase evaluation supports at most " + std::to_string(FixedPointAlpha::kMaxLimbs * 64) +
                        " fractional bits");
  if (n > alpha.max_phase_multiplier())
    throw PrecisionError("phase of " + std::to_string(n) + " * alpha needs more than " +
                         std::to_string(alpha.frac_bits()) + " fractional bits");
}

double phase(const FixedPointAlpha& alpha, std::uint64_t n) {
  check_phase_guard(alpha, n);
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> w{};
  mul_limbs(alpha.limbs(), n, w.data());
  const std::size_t L = alpha.limb_count();
  // top 53 bits, truncated, so the result stays < 1
  return static_cast<double>(w[L - 1] >> 11) * 0x1p-53;
}

double signed_phase(const FixedPointAlpha& alpha, std::uint64_t n) {
  check_phase_guard(alpha, n);
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> w{};
  mul_limbs(alpha.limbs(), n, w.data());
  const std::size_t L = alpha.limb_count();
  return signed_phase_words(w[L - 1], L > 1 ? w[L - 2] : 0);
}

}  // namespace mexp
