#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mexp/arith.hpp"
#include "mexp/diophantine.hpp"
#include "mexp/expsum.hpp"
#include "mexp/ratio.hpp"

namespace mexp {

/// Observed left side against the evaluated right side of a lemma, with all
/// implied constants set to 1.
struct LemmaRatio {
  std::uint64_t x = 0, M = 0;
  std::optional<std::uint64_t> N;  // absent for Lemma 1
  BigInt q;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double lhs_err = 0.0;  // accumulated error bound on lhs
};

/// lhs = sum_{m <= M} |sum_{n <= x/m} e(alpha m n)|, rhs = (M + x/q + q) log(2qx).
LemmaRatio lemma1_check(std::uint64_t x, std::uint64_t M, const FixedPointAlpha& alpha, const QSelection& qsel);

enum class SequenceChoice { mobius, ones, random_unit };

SequenceChoice parse_sequence_choice(const std::string& text);
std::string to_string(SequenceChoice s);

/// lhs = |sum_{mn <= x, m > M, n > N} a_m b_n e(alpha m n)|,
/// rhs = (x/M + x/N + x/q + q)^(1/2) x^(1/2) (log x)^2.
/// `seed` only matters for random_unit.
LemmaRatio lemma2_check(std::uint64_t x, std::uint64_t M, std::uint64_t N, const FixedPointAlpha& alpha,
                        const QSelection& qsel, SequenceChoice seq, const SieveTables& tables,
                        std::uint64_t seed = 0, const ExecConfig& exec = {});

/// The coefficient sequences lemma2_check uses, indices 0..len-1 (entry 0 unused).
std::vector<std::complex<double>> lemma2_sequence(SequenceChoice seq, std::uint64_t len, const SieveTables& tables,
                                                  std::uint64_t seed, int which);

struct PropositionBounds {
  double t1_bound = 0.0;  // (MN + x/q + q) x^eps log(2qx)
  double t2_bound = 0.0;  // (x/M + x/N + x/q + q)^(1/2) x^(1/2+eps) (log x)^2
};

PropositionBounds proposition_bounds(std::uint64_t x, std::uint64_t M, std::uint64_t N, const BigInt& q,
                                     double epsilon);

/// max(4/5, (2 eta - 1) / (2 eta)), exactly.
Ratio theorem_exponent(const Ratio& eta);
/// The eta > 5/2 branch alone: (2 eta - 1) / (2 eta).
Ratio large_eta_branch(const Ratio& eta);

/// Smallest integer M with M^5 >= x^2, i.e. ceil(x^(2/5)).
std::uint64_t ceil_x_two_fifths(std::uint64_t x);

/// Default tau for a given eta: max(eta + 1/10, 5/2).
Ratio default_tau(const Ratio& eta);

struct SweepRecord {
  std::uint64_t x = 0;
  std::uint64_t M = 0;
  double abs_sum = 0.0;
  double err_bound = 0.0;
  double emp_exponent = 0.0;
  double pred_exponent = 0.0;
  Ratio eta;
  Ratio tau;
  std::optional<BigInt> q;       // absent when select_q failed
  bool xrange_ok = false;
  bool approx_ok = false;
  double t1_bound = 0.0;  // (x^{4/5} + x^{1-1/tau}) x^eps
  double t2_bound = 0.0;  // (x^{8/5} + x^{2-1/tau})^{1/2} x^eps
  std::optional<double> lemma1_ratio;
  std::optional<double> lemma2_ratio;
  std::string error;  // select_q failure message, if any
};

struct SweepOptions {
  std::optional<Ratio> tau;  // default_tau(eta) when absent
  Ratio epsilon{1, 20};
  bool with_lemmas = false;
  int frac_bits = FixedPointAlpha::kDefaultFracBits;
  ExecConfig exec;
};

/// eta used by the sweep: the exact value if known, else estimate_eta on 30 convergents.
Ratio sweep_eta(const IrrationalSpec& spec);

std::vector<SweepRecord> theorem_sweep(const IrrationalSpec& spec, const std::vector<std::uint64_t>& xs,
                                       const SieveTables& tables, const SweepOptions& options = {});

}  // namespace mexp
