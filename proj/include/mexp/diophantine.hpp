#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mexp/bigint.hpp"
#include "mexp/fixed_point.hpp"
#include "mexp/ratio.hpp"

namespace mexp {

/// (P + sqrt(D)) / Q with D > 0 not a perfect square and Q != 0.
struct QuadraticSurd {
  BigInt P, D, Q;
};

/// [a0; a1, a2, ...], finite. a0 any integer, the rest positive.
struct ExplicitCF {
  std::vector<BigInt> terms;
};

/// Continued fraction whose partial quotients a_{i+1} = max(1, ceil(q_i^(eta-2)))
/// give irrationality exponent eta. `seed` holds the leading terms a0, a1, ...
struct PrescribedExponent {
  Ratio eta;
  std::vector<BigInt> seed{0, 1};
};

class IrrationalSpec {
 public:
  using Variant = std::variant<QuadraticSurd, ExplicitCF, PrescribedExponent>;

  static IrrationalSpec quadratic(BigInt P, BigInt D, BigInt Q);
  static IrrationalSpec explicit_cf(std::vector<BigInt> terms);
  static IrrationalSpec prescribed(Ratio eta, std::vector<BigInt> seed = {0, 1});

  /// Parses `quad:D`, `quad:P,D,Q`, `cf:a0,a1,...`, `liouville:ETA`, `golden`.
  static IrrationalSpec parse(std::string_view text);

  const Variant& variant() const { return v_; }
  /// Canonical text form accepted by parse().
  std::string str() const;

  /// eta when it is known exactly: 2 for quadratic surds, the prescribed eta otherwise.
  std::optional<Ratio> known_eta() const;

 private:
  explicit IrrationalSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct Convergent {
  std::size_t index = 0;
  BigInt p;
  BigInt q;
};

/// Produces partial quotients and convergents one at a time.
class CfGenerator {
 public:
  explicit CfGenerator(const IrrationalSpec& spec);

  /// Next partial quotient, or nullopt when an explicit CF is exhausted.
  std::optional<BigInt> next_term();
  /// Advances one term and returns the convergent it completes.
  std::optional<Convergent> next_convergent();

 private:
  const IrrationalSpec* spec_;
  std::size_t produced_ = 0;
  // quadratic state
  BigInt P_, Q_, D_, isqrt_D_;
  // convergent recurrence state: (p_{i-1}, q_{i-1}), (p_{i-2}, q_{i-2})
  BigInt p1_ = 1, q1_ = 0, p2_ = 0, q2_ = 1;
};

std::vector<BigInt> cf_terms(const IrrationalSpec& spec, std::size_t count);
std::vector<Convergent> convergents(const IrrationalSpec& spec, std::size_t count);

/// Rounds p_i/q_i for the first convergent with q_i^2 > 2^(frac_bits+2).
FixedPointAlpha alpha_fixed_point(const IrrationalSpec& spec, int frac_bits = FixedPointAlpha::kDefaultFracBits);
/// Same, drawing on already computed convergents.
FixedPointAlpha alpha_fixed_point(const std::vector<Convergent>& convs, int frac_bits);

/// 2 + max over the trailing third of log(a_{i+1}) / log(q_i).
double estimate_eta(const std::vector<Convergent>& convs);

/// Exact result of comparing a quantity derived from alpha against a threshold
/// using the fixed-point enclosure of alpha.
enum class Decision { holds, fails, undecided };

/// Bounds on |q alpha - p| as numerators over 2^frac_bits.
struct DistanceBounds {
  BigInt lower;
  BigInt upper;
};
DistanceBounds distance_bounds(const FixedPointAlpha& alpha, const BigInt& p, const BigInt& q);

/// |alpha - p/q| < 1 / (q q_next)
Decision convergent_gap(const FixedPointAlpha& alpha, const Convergent& c, const BigInt& q_next);

struct GapCheck {
  std::size_t index = 0;
  Decision decision = Decision::undecided;
  int frac_bits = 0;  // precision the decision was made at
};

/// Checks |alpha - p_i/q_i| < 1/(q_i q_{i+1}) for i < pairs, with alpha
/// enclosed at `base_frac_bits` when that is decisive and at higher precision
/// (from the later convergents, or from `spec` when those run short) when it is not.
std::vector<GapCheck> check_convergent_gaps(const IrrationalSpec& spec, const std::vector<Convergent>& convs,
                                            std::size_t pairs,
                                            int base_frac_bits = FixedPointAlpha::kDefaultFracBits);

/// |alpha - p/q| > q^(-tau)
Decision exceeds_power(const FixedPointAlpha& alpha, const BigInt& p, const BigInt& q, const Ratio& tau);

struct QSelection {
  Ratio tau;
  std::size_t index = 0;  // i
  BigInt q;               // q_i
  BigInt p;               // p_i
  BigInt q_prev;          // q_{i-1}
  BigInt p_prev;
  bool lower_ok = false;   // q^tau < x^(tau-1)   (q^{tau/(tau-1)} < x)
  bool upper_ok = false;   // x < q^tau
  bool xrange_ok = false;  // both
  bool approx_ok = false;  // |alpha - p_{i-1}/q_{i-1}| > q_{i-1}^{-tau}
  bool approx_decided = true;
};

/// Picks the minimal i with q_{i-1} <= x^(1/tau) < q_i (exact integer powers).
QSelection select_q(const IrrationalSpec& spec, std::uint64_t x, const Ratio& tau,
                    int frac_bits = FixedPointAlpha::kDefaultFracBits);

/// Entry i-1 tells whether q_i < q_{i-1}^(tau-1), for i = 1 .. convs.size()-1.
std::vector<bool> check_qgrowth(const std::vector<Convergent>& convs, const Ratio& tau);

/// q < x^(1 - 1/tau) and x/q < x^(1 - 1/tau), decided exactly.
bool xq_range_holds(const BigInt& q, std::uint64_t x, const Ratio& tau);

/// Exact comparison a^e1 < b^e2 for nonnegative bases.
bool pow_less(const BigInt& a, std::uint64_t e1, const BigInt& b, std::uint64_t e2);

}  // namespace mexp
