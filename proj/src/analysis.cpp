#include "mexp/analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mexp/errors.hpp"
#include "mexp/phase_walker.hpp"

namespace mexp {

namespace {

double q_as_double(const BigInt& q) { return big_to_double(q); }

}  // namespace

LemmaRatio lemma1_check(std::uint64_t x, std::uint64_t M, const FixedPointAlpha& alpha, const QSelection& qsel) {
  if (M == 0 || x == 0) throw ConfigError("lemma1_check: x and M must be positive");
  LemmaRatio r;
  r.x = x;
  r.M = M;
  r.q = qsel.q;
  CompensatedSum acc;
  for (std::uint64_t m = 1; m <= std::min(M, x); ++m) {
    const ComplexSum inner = linear_sum(alpha, m, x / m);
    const double a = inner.abs();
    acc.add({a, 0.0}, inner.err_bound + kUnitRoundoff * a);
  }
  const auto total = acc.result();
  r.lhs = total.re;
  r.lhs_err = total.err_bound;
  const double q = q_as_double(qsel.q);
  const double xd = static_cast<double>(x);
  r.rhs = (static_cast<double>(M) + xd / q + q) * std::log(2.0 * q * xd);
  r.ratio = r.lhs / r.rhs;
  return r;
}

SequenceChoice parse_sequence_choice(const std::string& text) {
  if (text == "mobius") return SequenceChoice::mobius;
  if (text == "ones") return SequenceChoice::ones;
  if (text == "random") return SequenceChoice::random_unit;
  throw ConfigError("sequence choice must be mobius, ones or random, got '" + text + "'");
}

std::string to_string(SequenceChoice s) {
  switch (s) {
    case SequenceChoice::mobius: return "mobius";
    case SequenceChoice::ones: return "ones";
    default: return "random";
  }
}

std::vector<std::complex<double>> lemma2_sequence(SequenceChoice seq, std::uint64_t len, const SieveTables& tables,
                                                  std::uint64_t seed, int which) {
  std::vector<std::complex<double>> out(len, {0.0, 0.0});
  switch (seq) {
    case SequenceChoice::mobius:
      if (len > 0 && len - 1 > tables.limit()) throw RangeError("lemma2 sequence exceeds sieve limit");
      for (std::uint64_t i = 1; i < len; ++i) out[i] = static_cast<double>(tables.mobius[i]);
      break;
    case SequenceChoice::ones:
      for (std::uint64_t i = 1; i < len; ++i) out[i] = 1.0;
      break;
    case SequenceChoice::random_unit: {
      std::mt19937_64 gen(seed * 2 + static_cast<std::uint64_t>(which));
      for (std::uint64_t i = 1; i < len; ++i) out[i] = unit_phase(gen());
      break;
    }
  }
  return out;
}

LemmaRatio lemma2_check(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                        const QSelection& qsel, SequenceChoice seq, const SieveTables& tables, std::uint64_t seed,
                        const ExecConfig& exec) {
  if (M == 0 || N == 0 || x < 2) throw ConfigError("lemma2_check: needs x >= 2 and M, N >= 1");
  check_phase_guard(alpha, x);
  LemmaRatio r;
  r.x = x;
  r.M = M;
  r.N = N;
  r.q = qsel.q;

  const std::uint64_t m_lo = M + 1;
  const std::uint64_t m_hi = x / (N + 1);
  CompensatedSum total;
  if (m_lo <= m_hi) {
    const auto a = lemma2_sequence(seq, m_hi + 1, tables, seed, 0);
    const auto b = lemma2_sequence(seq, x / m_lo + 1, tables, seed, 1);
    const std::uint64_t width = std::max<std::uint64_t>(1, exec.coeff_leaf);
    const std::uint64_t leaves = (m_hi - m_lo + width) / width;
    std::vector<CompensatedSum> parts(leaves);
    const int threads = exec.workers > 0 ? exec.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t leaf = 0; leaf < static_cast<std::int64_t>(leaves); ++leaf) {
      const std::uint64_t lo = m_lo + static_cast<std::uint64_t>(leaf) * width;
      const std::uint64_t hi = std::min(m_hi, lo + width - 1);
      CompensatedSum acc;
      for (std::uint64_t m = lo; m <= hi; ++m) {
        if (a[m] == 0.0) continue;
        PhaseWalker walk(alpha, m, N + 1);
        for (std::uint64_t n = N + 1; n <= x / m; ++n, walk.advance()) {
          if (b[n] == 0.0) continue;
          const auto w = a[m] * b[n];
          acc.add(w * unit_phase(walk.top()), std::abs(w) * (kUnitPhaseErr + 4 * kUnitRoundoff));
        }
      }
      parts[static_cast<std::size_t>(leaf)] = acc;
    }
    total = tree_reduce(std::move(parts));
  }
  const auto s = total.result();
  r.lhs = s.abs();
  r.lhs_err = s.err_bound;
  const double q = q_as_double(qsel.q);
  const double xd = static_cast<double>(x);
  const double lx = std::log(xd);
  r.rhs = std::sqrt(xd / static_cast<double>(M) + xd / static_cast<double>(N) + xd / q + q) * std::sqrt(xd) * lx * lx;
  r.ratio = r.lhs / r.rhs;
  return r;
}

PropositionBounds proposition_bounds(std::uint64_t x, std::uint64_t M, std::uint64_t N, const BigInt& q,
                                     double epsilon) {
  if (epsilon < 0) throw ConfigError("proposition_bounds: epsilon must be nonnegative");
  const double xd = static_cast<double>(x), Md = static_cast<double>(M), Nd = static_cast<double>(N);
  const double qd = q_as_double(q);
  const double lx = std::log(xd);
  PropositionBounds b;
  b.t1_bound = (Md * Nd + xd / qd + qd) * std::pow(xd, epsilon) * std::log(2.0 * qd * xd);
  b.t2_bound = std::sqrt(xd / Md + xd / Nd + xd / qd + qd) * std::pow(xd, 0.5 + epsilon) * lx * lx;
  return b;
}

Ratio large_eta_branch(const Ratio& eta) { return (Ratio(2) * eta - Ratio(1)) / (Ratio(2) * eta); }

Ratio theorem_exponent(const Ratio& eta) {
  if (eta < Ratio(2)) throw ConfigError("irrationality exponent is at least 2");
  return max(Ratio(4, 5), large_eta_branch(eta));
}

std::uint64_t ceil_x_two_fifths(std::uint64_t x) {
  if (x == 0) return 0;
  auto m = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(x), 0.4)));
  const BigInt x2 = big_pow(big_from_u64(x), 2);
  while (m > 0 && big_pow(big_from_u64(m - 1), 5) >= x2) --m;
  while (big_pow(big_from_u64(m), 5) < x2) ++m;
  return m;
}

Ratio default_tau(const Ratio& eta) { return max(eta + Ratio(1, 10), Ratio(5, 2)); }

Ratio sweep_eta(const IrrationalSpec& spec) {
  if (auto eta = spec.known_eta()) return *eta;
  return ceil_to_denominator(estimate_eta(convergents(spec, 30)), 100);
}

std::vector<SweepRecord> theorem_sweep(const IrrationalSpec& spec, const std::vector<std::uint64_t>& xs,
                                       const SieveTables& tables, const SweepOptions& options) {
  for (auto x : xs)
    if (x > tables.limit()) throw RangeError("sweep x = " + std::to_string(x) + " exceeds sieve limit");
  const Ratio eta = sweep_eta(spec);
  const Ratio tau = options.tau.value_or(default_tau(eta));
  const double eps = options.epsilon.value();
  const double pred = (theorem_exponent(eta) + options.epsilon).value();
  const FixedPointAlpha alpha = alpha_fixed_point(spec, options.frac_bits);

  std::vector<SweepRecord> rows;
  rows.reserve(xs.size());
  for (auto x : xs) {
    SweepRecord r;
    r.x = x;
    r.M = ceil_x_two_fifths(x);
    r.eta = eta;
    r.tau = tau;
    r.pred_exponent = pred;
    const auto s = mobius_sum(x, alpha, tables, options.exec);
    r.abs_sum = s.abs();
    r.err_bound = s.err_bound;
    const double lx = std::log(static_cast<double>(x));
    r.emp_exponent = std::log(r.abs_sum) / lx;
    const double xd = static_cast<double>(x), inv_tau = 1.0 / tau.value();
    r.t1_bound = (std::pow(xd, 0.8) + std::pow(xd, 1.0 - inv_tau)) * std::pow(xd, eps);
    r.t2_bound = std::sqrt(std::pow(xd, 1.6) + std::pow(xd, 2.0 - inv_tau)) * std::pow(xd, eps);
    try {
      const auto sel = select_q(spec, x, tau, options.frac_bits);
      r.q = sel.q;
      r.xrange_ok = sel.xrange_ok;
      r.approx_ok = sel.approx_ok;
      if (options.with_lemmas) {
        r.lemma1_ratio = lemma1_check(x, r.M, alpha, sel).ratio;
        r.lemma2_ratio =
            lemma2_check(x, r.M, r.M, alpha, sel, SequenceChoice::mobius, tables, 0, options.exec).ratio;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mexp
