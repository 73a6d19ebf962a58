#include "mexp/expsum.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mexp/errors.hpp"
#include "mexp/phase_walker.hpp"

namespace mexp {

namespace {

constexpr double u = kUnitRoundoff;

int thread_count(const ExecConfig& exec) { return exec.workers > 0 ? exec.workers : omp_get_max_threads(); }

void require_in_table(std::uint64_t n, const SieveTables& tables, const char* what) {
  if (n > tables.limit())
    throw RangeError(std::string(what) + " = " + std::to_string(n) + " exceeds sieve limit " +
                     std::to_string(tables.limit()));
}

void guard_product(const FixedPointAlpha& alpha, std::uint64_t a, std::uint64_t b) {
  const auto prod = static_cast<u128>(a) * b;
  if (prod > alpha.max_phase_multiplier())
    throw PrecisionError("phase multiplier " + std::to_string(a) + " * " + std::to_string(b) + " needs more than " +
                         std::to_string(alpha.frac_bits()) + " fractional bits");
}

std::uint64_t leaf_count(std::uint64_t span, std::uint64_t width) { return span == 0 ? 0 : (span + width - 1) / width; }

}  // namespace

// ---------------------------------------------------------------------------
// linear sums

ComplexSum linear_sum_direct(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L) {
  if (L == 0) return {};
  guard_product(alpha, m, L);
  CompensatedSum acc;
  PhaseWalker walk(alpha, m, 1);
  for (std::uint64_t l = 1; l <= L; ++l) {
    acc.add(unit_phase(walk.top()), kUnitPhaseErr);
    walk.advance();
  }
  return acc.result();
}

ComplexSum linear_sum_closed(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L) {
  if (L == 0) return {};
  guard_product(alpha, m, L + 1);
  const std::size_t n = alpha.limb_count();
  std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs> w1{}, wL{}, wL1{};
  mul_limbs(alpha.limbs(), m, w1.data());
  mul_limbs({w1.data(), n}, L, wL.data());
  unsigned char c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const u128 s = static_cast<u128>(wL[i]) + w1[i] + c;
    wL1[i] = static_cast<std::uint64_t>(s);
    c = static_cast<unsigned char>(s >> 64);
  }
  auto top2 = [n](const std::array<std::uint64_t, FixedPointAlpha::kMaxLimbs>& w) {
    return signed_phase_words(w[n - 1], n > 1 ? w[n - 2] : 0);
  };
  const double theta = top2(w1);
  if (theta == 0.0) throw PrecisionError("closed-form linear sum needs ||m alpha|| > 0");
  const double phiL = top2(wL), phiL1 = top2(wL1);
  // L theta = phiL + kL and (L+1) theta = phiL1 + kL1 with integers kL, kL1
  const double Ld = static_cast<double>(L);
  const auto kL = std::llround(Ld * theta - phiL);
  const auto kL1 = std::llround((Ld + 1.0) * theta - phiL1);
  const double sign = ((kL + kL1) & 1) ? -1.0 : 1.0;
  const double s_theta = std::sin(std::numbers::pi * theta);
  const double ratio = sign * std::sin(std::numbers::pi * phiL) / s_theta;
  // sum = e((L+1) theta / 2) sin(pi L theta) / sin(pi theta)
  ComplexSum r;
  r.re = ratio * std::cos(std::numbers::pi * phiL1);
  r.im = ratio * std::sin(std::numbers::pi * phiL1);
  r.terms = L;
  r.err_bound = 16 * u * (1.0 + 1.0 / std::abs(s_theta));
  return r;
}

ComplexSum linear_sum(const FixedPointAlpha& alpha, std::uint64_t m, std::uint64_t L) {
  if (L == 0) return {};
  guard_product(alpha, m, L + 1);
  if (dist_to_int(signed_phase(alpha, m)) >= kClosedFormThreshold) return linear_sum_closed(alpha, m, L);
  return linear_sum_direct(alpha, m, L);
}

// ---------------------------------------------------------------------------
// S(x)

ComplexSum mobius_sum(std::uint64_t x, const FixedPointAlpha& alpha, const SieveTables& tables,
                      const ExecConfig& exec) {
  require_in_table(x, tables, "x");
  if (x == 0) return {};
  check_phase_guard(alpha, x);
  const std::uint64_t width = std::max<std::uint64_t>(1, exec.leaf_width);
  const std::uint64_t leaves = leaf_count(x, width);
  std::vector<CompensatedSum> parts(leaves);
  const auto mu = tables.mobius.values();

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(exec))
  for (std::int64_t leaf = 0; leaf < static_cast<std::int64_t>(leaves); ++leaf) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(leaf) * width;
    const std::uint64_t hi = std::min(x, lo + width - 1);
    CompensatedSum acc;
    PhaseWalker walk(alpha, 1, lo);
    for (std::uint64_t n = lo; n <= hi; ++n, walk.advance()) {
      const int m = mu[n];
      if (m == 0) continue;
      const auto z = unit_phase(walk.top());
      acc.add(m > 0 ? z : -z, kUnitPhaseErr);
    }
    parts[static_cast<std::size_t>(leaf)] = acc;
  }
  return tree_reduce(std::move(parts)).result();
}

// ---------------------------------------------------------------------------
// T_I

ComplexSum type1_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, GammaVariant variant, const ExecConfig& exec) {
  const auto MN = static_cast<u128>(M) * N;
  const std::uint64_t K = MN < x ? static_cast<std::uint64_t>(MN) : x;
  if (K == 0) return {};
  require_in_table(K, tables, "min(MN, x)");
  guard_product(alpha, x, 2);
  const std::uint64_t width = std::max<std::uint64_t>(1, exec.coeff_leaf);
  const std::uint64_t leaves = leaf_count(K, width);
  std::vector<CompensatedSum> parts(leaves);
  bool violated = false;

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(exec))
  for (std::int64_t leaf = 0; leaf < static_cast<std::int64_t>(leaves); ++leaf) {
    const std::uint64_t lo = 1 + static_cast<std::uint64_t>(leaf) * width;
    const std::uint64_t hi = std::min(K, lo + width - 1);
    CompensatedSum acc;
    for (std::uint64_t k = lo; k <= hi; ++k) {
      const auto f = factor(k, tables.spf);
      const std::int64_t g = gamma_coeff(k, M, N, f.span(), tables.mobius, variant);
      if (g == 0) continue;
      if (static_cast<std::uint64_t>(std::abs(g)) > f.divisor_count()) {
#pragma omp atomic write
        violated = true;
      }
      const ComplexSum inner = linear_sum(alpha, k, x / k);
      const double gd = static_cast<double>(g);
      acc.add({gd * inner.re, gd * inner.im}, std::abs(gd) * (inner.err_bound + 2 * u * inner.abs()));
    }
    parts[static_cast<std::size_t>(leaf)] = acc;
  }
  if (violated) throw InvariantError("type1_sum: |gamma(k)| exceeded d(k)");
  return tree_reduce(std::move(parts)).result();
}

// ---------------------------------------------------------------------------
// T_II

ComplexSum type2_sum(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                     const SieveTables& tables, const ExecConfig& exec) {
  require_in_table(x, tables, "x");
  if (N + 1 > x || M + 1 > x) return {};
  const std::uint64_t k_lo = M + 1;
  const std::uint64_t k_hi = x / (N + 1);
  if (k_lo > k_hi) return {};
  check_phase_guard(alpha, x);
  const std::uint64_t width = std::max<std::uint64_t>(1, exec.coeff_leaf);
  const std::uint64_t block = leaf_count(std::max<std::uint64_t>(exec.tau_block, 1), width) * width;
  const std::uint64_t leaves = leaf_count(k_hi - k_lo + 1, width);
  std::vector<CompensatedSum> parts(leaves);
  const auto mu = tables.mobius.values();
  const int threads = thread_count(exec);
  std::vector<std::int64_t> tau(block);

  for (std::uint64_t b = k_lo; b <= k_hi; b += block) {
    const std::uint64_t e = std::min(k_hi, b + block - 1);
    const auto count = static_cast<std::int64_t>(e - b + 1);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t j = 0; j < count; ++j) {
      const auto f = factor(b + static_cast<std::uint64_t>(j), tables.spf);
      tau[static_cast<std::size_t>(j)] = tau_coeff(M, f.span(), tables.mobius);
    }
    const std::uint64_t first_leaf = (b - k_lo) / width;
    const std::uint64_t block_leaves = leaf_count(e - b + 1, width);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t bl = 0; bl < static_cast<std::int64_t>(block_leaves); ++bl) {
      const std::uint64_t lo = b + static_cast<std::uint64_t>(bl) * width;
      const std::uint64_t hi = std::min(e, lo + width - 1);
      CompensatedSum acc;
      for (std::uint64_t k = lo; k <= hi; ++k) {
        const std::int64_t t = tau[k - b];
        if (t == 0) continue;
        const std::uint64_t n_hi = x / k;
        PhaseWalker walk(alpha, k, N + 1);
        for (std::uint64_t n = N + 1; n <= n_hi; ++n, walk.advance()) {
          const int m = mu[n];
          if (m == 0) continue;
          const double coef = static_cast<double>(m * t);
          const auto z = unit_phase(walk.top());
          acc.add(coef * z, std::abs(coef) * (kUnitPhaseErr + u));
        }
      }
      parts[first_leaf + static_cast<std::uint64_t>(bl)] = acc;
    }
  }
  return tree_reduce(std::move(parts)).result();
}

// ---------------------------------------------------------------------------

VaughanDecomposition vaughan_decompose(std::uint64_t x, std::uint64_t M, std::uint64_t N,
                                       const FixedPointAlpha& alpha, const SieveTables& tables,
                                       GammaVariant variant, const ExecConfig& exec) {
  require_in_table(x, tables, "x");
  VaughanDecomposition d;
  d.x = x;
  d.M = M;
  d.N = N;
  d.variant = variant;
  d.s_total = mobius_sum(x, alpha, tables, exec);
  d.s_M = mobius_sum(std::min(M, x), alpha, tables, exec);
  d.s_N = mobius_sum(std::min(N, x), alpha, tables, exec);
  d.t1 = type1_sum(x, M, N, alpha, tables, variant, exec);
  d.t2 = type2_sum(x, M, N, alpha, tables, exec);
  const auto r = d.s_total.value() + d.t1.value() - d.t2.value() - d.s_M.value() - d.s_N.value();
  d.residual = std::abs(r);
  const double mags = d.s_total.abs() + d.t1.abs() + d.t2.abs() + d.s_M.abs() + d.s_N.abs();
  d.err_budget = d.s_total.err_bound + d.t1.err_bound + d.t2.err_bound + d.s_M.err_bound + d.s_N.err_bound +
                 8 * u * mags;
  return d;
}

}  // namespace mexp
