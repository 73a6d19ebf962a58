#include <algorithm>
#include <array>
#include <string>

#include "mexp/errors.hpp"
#include "mexp/expsum.hpp"
#include "mexp/phase_walker.hpp"

namespace mexp::reference {

namespace {

std::complex<double> e_of(const FixedPointAlpha& alpha, std::uint64_t n) {
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> w{};
  mul_limbs(alpha.limbs(), n, w.data());
  return unit_phase(w[alpha.limb_count() - 1]);
}

}  // namespace

ComplexSum mobius_sum(std::uint64_t x, const FixedPointAlpha& alpha, const SieveTables& tables) {
  if (x > tables.limit()) throw RangeError("x exceeds sieve limit");
  check_phase_guard(alpha, x);
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= x; ++n) {
    const int m = tables.mobius[n];
    if (m != 0) acc.add(static_cast<double>(m) * e_of(alpha, n), kUnitPhaseErr);
  }
  return acc.result();
}

ComplexSum type1_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, GammaVariant variant) {
  const std::uint64_t K = std::min<std::uint64_t>(x, M * N);
  CompensatedSum acc;
  for (std::uint64_t k = 1; k <= K; ++k) {
    const std::int64_t g = gamma_coeff(CoeffQuery{k, M, N}, tables, variant);
    if (g == 0) continue;
    const ComplexSum inner = linear_sum(alpha, k, x / k);
    const double gd = static_cast<double>(g);
    acc.add(gd * inner.value(), std::abs(gd) * (inner.err_bound + 2 * kUnitRoundoff * inner.abs()));
  }
  return acc.result();
}

ComplexSum type2_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables) {
  if (x > tables.limit()) throw RangeError("x exceeds sieve limit");
  CompensatedSum acc;
  if (M + 1 > x) return acc.result();
  for (std::uint64_t n = N + 1; n <= x / (M + 1); ++n) {
    const int m = tables.mobius[n];
    if (m == 0) continue;
    for (std::uint64_t k = M + 1; k <= x / n; ++k) {
      const std::int64_t t = tau_coeff(CoeffQuery{k, M, 0}, tables);
      if (t == 0) continue;
      const double coef = static_cast<double>(m * t);
      acc.add(coef * e_of(alpha, k * n), std::abs(coef) * (kUnitPhaseErr + kUnitRoundoff));
    }
  }
  return acc.result();
}

}  // namespace mexp::reference
