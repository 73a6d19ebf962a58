#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "mexp/fixed_point.hpp"

namespace mexp {

using u128 = unsigned __int128;

/// n * alpha (mod 1) in fixed point: out = (mult * limbs) mod 2^(64 L).
inline void mul_limbs(std::span<const std::uint64_t> limbs, std::uint64_t mult, std::uint64_t* out) {
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < limbs.size(); ++i) {
    const u128 t = static_cast<u128>(limbs[i]) * mult + carry;
    out[i] = static_cast<std::uint64_t>(t);
    carry = static_cast<std::uint64_t>(t >> 64);
  }
}

/// Walks the phases start*a, (start+1)*a, ... with `step` a stride, exactly
/// modulo 1 at the full fixed-point width (additions only).
class PhaseWalker {
 public:
  PhaseWalker(const FixedPointAlpha& alpha, std::uint64_t stride, std::uint64_t start) : n_(alpha.limb_count()) {
    mul_limbs(alpha.limbs(), stride, step_.data());
    // start * stride * alpha, done as (start * (stride * alpha))
    mul_limbs({step_.data(), n_}, start, acc_.data());
  }

  std::uint64_t top() const { return acc_[n_ - 1]; }
  std::uint64_t second() const { return n_ > 1 ? acc_[n_ - 2] : 0; }

  void advance() {
    unsigned char c = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const u128 s = static_cast<u128>(acc_[i]) + step_[i] + c;
      acc_[i] = static_cast<std::uint64_t>(s);
      c = static_cast<unsigned char>(s >> 64);
    }
  }

 private:
  std::size_t n_;
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> step_{};
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> acc_{};
};

/// e(t / 2^64). The phase is reduced to the nearest quarter turn with integer
/// arithmetic so sin/cos only ever see |x| <= pi/4.
inline std::complex<double> unit_phase(std::uint64_t t) {
  const std::uint64_t quarter = (t + (std::uint64_t{1} << 61)) >> 62;  // nearest multiple of 1/4, mod 4
  const auto r = static_cast<std::int64_t>(t - (quarter << 62));      // |r| <= 2^61
  const double x = static_cast<double>(r) * (2.0 * std::numbers::pi * 0x1p-64);
  const double c = std::cos(x), s = std::sin(x);
  switch (quarter & 3) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

/// Signed phase in [-1/2, 1/2) from the top two words.
inline double signed_phase_words(std::uint64_t top, std::uint64_t second) {
  return static_cast<double>(static_cast<std::int64_t>(top)) * 0x1p-64 + static_cast<double>(second) * 0x1p-128;
}

}  // namespace mexp
