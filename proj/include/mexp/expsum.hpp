#pragma once

#include <cstdint>

#include "mexp/accum.hpp"
#include "mexp/arith.hpp"
#include "mexp/fixed_point.hpp"

namespace mexp {

/// Partitioning of the parallel kernels. Results depend on the widths but
/// never on `workers`.
struct ExecConfig {
  int workers = 0;                           // 0: OpenMP default
  std::uint64_t leaf_width = 1 << 16;        // n per leaf in mobius_sum
  std::uint64_t coeff_leaf = 1 << 10;        // k per leaf in type1/type2
  std::uint64_t tau_block = 1 << 16;         // k per cached tau block in type2
};

/// Below this ||m alpha|| linear_sum sums directly instead of using the closed form.
inline constexpr double kClosedFormThreshold = 0x1p-20;

/// S(x) = sum_{n <= x} mu(n) e(alpha n).
ComplexSum mobius_sum(std::uint64_t x, const FixedPointAlpha& alpha, const SieveTables& tables,
                      const ExecConfig& exec = {});

/// sum_{1 <= l <= L} e(alpha m l).
ComplexSum linear_sum(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L);
/// Direct summation path of linear_sum, exposed for cross-checking.
ComplexSum linear_sum_direct(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L);
/// Closed-form path; valid for ||m alpha|| > 0.
ComplexSum linear_sum_closed(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L);

/// T_I = sum_{k <= min(MN, x)} gamma(k) sum_{l <= x/k} e(alpha l k).
ComplexSum type1_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, GammaVariant variant = GammaVariant::exact,
                     const ExecConfig& exec = {});

/// T_II = sum_{kn <= x, k > M, n > N} mu(n) tau(k, M) e(alpha k n).
ComplexSum type2_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, const ExecConfig& exec = {});

struct VaughanDecomposition {
  std::uint64_t x = 0, M = 0, N = 0;
  GammaVariant variant = GammaVariant::exact;
  ComplexSum t1, t2, s_M, s_N, s_total;
  /// |S(x) + T_I - T_II - S(M) - S(N)|
  double residual = 0.0;
  /// err_bound of the five sums plus rounding of the combination.
  double err_budget = 0.0;
};

VaughanDecomposition vaughan_decompose(std::uint64_t x, std::uint64_t M, std::uint64_t N,
                                       const FixedPointAlpha& alpha, const SieveTables& tables,
                                       GammaVariant variant = GammaVariant::exact, const ExecConfig& exec = {});

/// Serial, single-accumulator versions kept as a reference for the parallel
/// kernels: phases by direct multiplication, T_II in n-outer order with
/// uncached tau.
namespace reference {
ComplexSum mobius_sum(std::uint64_t x, const FixedPointAlpha& alpha, const SieveTables& tables);
ComplexSum type1_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, GammaVariant variant = GammaVariant::exact);
ComplexSum type2_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables);
}  // namespace reference

}  // namespace mexp
