#include "mexp/diophantine.hpp"

#include <algorithm>
#include <cmath>

#include "mexp/errors.hpp"
#include "strict_parse.hpp"

namespace mexp {

namespace {

BigInt parse_big(std::string_view s, std::string_view what) {
  if (!detail::is_strict_decimal(s)) throw ConfigError(std::string(what) + ": expected a decimal integer, got '" + std::string(s) + "'");
  return BigInt(std::string(s), 10);
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  for (;;) {
    auto c = s.find(',');
    out.push_back(s.substr(0, c));
    if (c == std::string_view::npos) break;
    s.remove_prefix(c + 1);
  }
  return out;
}

BigInt isqrt(const BigInt& v) {
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// ceil(q^(num/den)) for num, den > 0
BigInt ceil_rational_power(const BigInt& q, std::uint64_t num, std::uint64_t den) {
  const BigInt v = big_pow(q, num);
  BigInt r;
  mpz_root(r.get_mpz_t(), v.get_mpz_t(), den);
  if (big_pow(r, den) < v) r += 1;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// IrrationalSpec

IrrationalSpec IrrationalSpec::quadratic(BigInt P, BigInt D, BigInt Q) {
  if (D <= 0) throw ConfigError("quad: D must be positive");
  if (mpz_perfect_square_p(D.get_mpz_t()))
    throw ConfigError("quad: D = " + D.get_str() + " is a perfect square, so (P+sqrt D)/Q is rational");
  if (Q == 0) throw ConfigError("quad: Q must be nonzero");
  return IrrationalSpec(QuadraticSurd{std::move(P), std::move(D), std::move(Q)});
}

IrrationalSpec IrrationalSpec::explicit_cf(std::vector<BigInt> terms) {
  if (terms.empty()) throw ConfigError("cf: needs at least a0");
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] <= 0) throw ConfigError("cf: partial quotients after a0 must be positive");
  return IrrationalSpec(ExplicitCF{std::move(terms)});
}

IrrationalSpec IrrationalSpec::prescribed(Ratio eta, std::vector<BigInt> seed) {
  if (eta <= Ratio(2)) throw ConfigError("liouville: eta must exceed 2 (eta = 2 is served by quad:)");
  if (seed.empty()) throw ConfigError("liouville: seed needs at least a0");
  for (std::size_t i = 1; i < seed.size(); ++i)
    if (seed[i] <= 0) throw ConfigError("liouville: seed partial quotients after a0 must be positive");
  return IrrationalSpec(PrescribedExponent{eta, std::move(seed)});
}

IrrationalSpec IrrationalSpec::parse(std::string_view text) {
  if (text == "golden") return quadratic(1, 5, 2);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError("alpha spec '" + std::string(text) + "': expected quad:, cf:, liouville: or golden");
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);
  if (kind == "quad") {
    const auto parts = split_commas(body);
    if (parts.size() == 1) return quadratic(0, parse_big(parts[0], "quad:D"), 1);
    if (parts.size() == 3)
      return quadratic(parse_big(parts[0], "quad:P"), parse_big(parts[1], "quad:D"), parse_big(parts[2], "quad:Q"));
    throw ConfigError("quad: expected quad:D or quad:P,D,Q");
  }
  if (kind == "cf") {
    std::vector<BigInt> terms;
    for (auto part : split_commas(body)) terms.push_back(parse_big(part, "cf term"));
    return explicit_cf(std::move(terms));
  }
  if (kind == "liouville") return prescribed(Ratio::parse(body));
  throw ConfigError("alpha spec '" + std::string(text) + "': unknown kind '" + std::string(kind) + "'");
}

std::string IrrationalSpec::str() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuadraticSurd>) {
          return "quad:" + v.P.get_str() + "," + v.D.get_str() + "," + v.Q.get_str();
        } else if constexpr (std::is_same_v<T, ExplicitCF>) {
          std::string s = "cf:";
          for (std::size_t i = 0; i < v.terms.size(); ++i) s += (i ? "," : "") + v.terms[i].get_str();
          return s;
        } else {
          return "liouville:" + v.eta.str();
        }
      },
      v_);
}

std::optional<Ratio> IrrationalSpec::known_eta() const {
  if (std::holds_alternative<QuadraticSurd>(v_)) return Ratio(2);
  if (const auto* pe = std::get_if<PrescribedExponent>(&v_)) return pe->eta;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CfGenerator

CfGenerator::CfGenerator(const IrrationalSpec& spec) : spec_(&spec) {
  if (const auto* qs = std::get_if<QuadraticSurd>(&spec.variant())) {
    P_ = qs->P;
    Q_ = qs->Q;
    D_ = qs->D;
    // keep Q | D - P^2 so the recurrence stays integral
    const BigInt disc = D_ - P_ * P_;
    if (disc % Q_ != 0) {
      const BigInt aq = abs(Q_);
      P_ *= aq;
      D_ *= Q_ * Q_;
      Q_ *= aq;
    }
    isqrt_D_ = isqrt(D_);
  }
}

std::optional<BigInt> CfGenerator::next_term() {
  BigInt a;
  const auto& v = spec_->variant();
  if (std::holds_alternative<QuadraticSurd>(v)) {
    if (Q_ > 0) {
      a = floor_div(P_ + isqrt_D_, Q_);
    } else {
      a = -floor_div(P_ + isqrt_D_, -Q_) - 1;
    }
    P_ = a * Q_ - P_;
    Q_ = (D_ - P_ * P_) / Q_;
  } else if (const auto* ecf = std::get_if<ExplicitCF>(&v)) {
    if (produced_ >= ecf->terms.size()) return std::nullopt;
    a = ecf->terms[produced_];
  } else {
    const auto& pe = std::get<PrescribedExponent>(v);
    if (produced_ < pe.seed.size()) {
      a = pe.seed[produced_];
    } else {
      // a_{i+1} from q_i, the latest denominator
      const auto num = static_cast<std::uint64_t>(pe.eta.num() - 2 * pe.eta.den());
      const auto den = static_cast<std::uint64_t>(pe.eta.den());
      a = std::max(BigInt(1), ceil_rational_power(q1_, num, den));
    }
  }
  BigInt p = a * p1_ + p2_;
  BigInt q = a * q1_ + q2_;
  p2_ = std::move(p1_);
  q2_ = std::move(q1_);
  p1_ = std::move(p);
  q1_ = std::move(q);
  ++produced_;
  return a;
}

std::optional<Convergent> CfGenerator::next_convergent() {
  if (!next_term()) return std::nullopt;
  return Convergent{produced_ - 1, p1_, q1_};
}

std::vector<BigInt> cf_terms(const IrrationalSpec& spec, std::size_t count) {
  if (count == 0) throw ConfigError("cf_terms: count must be at least 1");
  CfGenerator gen(spec);
  std::vector<BigInt> out;
  out.reserve(count);
  while (out.size() < count) {
    auto a = gen.next_term();
    if (!a)
      throw PrecisionError("insufficient terms: explicit continued fraction has only " + std::to_string(out.size()) +
                           " partial quotients, " + std::to_string(count) + " requested");
    out.push_back(std::move(*a));
  }
  return out;
}

std::vector<Convergent> convergents(const IrrationalSpec& spec, std::size_t count) {
  if (count < 2) throw ConfigError("convergents: count must be at least 2");
  CfGenerator gen(spec);
  std::vector<Convergent> out;
  out.reserve(count);
  while (out.size() < count) {
    auto c = gen.next_convergent();
    if (!c)
      throw PrecisionError("insufficient terms: explicit continued fraction has only " + std::to_string(out.size()) +
                           " partial quotients, " + std::to_string(count) + " requested");
    out.push_back(std::move(*c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed point

namespace {

FixedPointAlpha round_convergent(const Convergent& c, int frac_bits) {
  return FixedPointAlpha::from_fraction(c.p, c.q, frac_bits);
}

bool precise_enough(const Convergent& c, int frac_bits) {
  return 2 * (bit_length(c.q) - 1) > static_cast<std::size_t>(frac_bits + 2);
}

}  // namespace

FixedPointAlpha alpha_fixed_point(const IrrationalSpec& spec, int frac_bits) {
  if (frac_bits < 64) throw ConfigError("alpha_fixed_point: frac_bits must be at least 64");
  CfGenerator gen(spec);
  while (auto c = gen.next_convergent()) {
    if (precise_enough(*c, frac_bits)) return round_convergent(*c, frac_bits);
  }
  throw PrecisionError("alpha " + spec.str() + " is a finite continued fraction (rational); cannot reach " +
                       std::to_string(frac_bits) + " fractional bits");
}

FixedPointAlpha alpha_fixed_point(const std::vector<Convergent>& convs, int frac_bits) {
  for (const auto& c : convs)
    if (precise_enough(c, frac_bits)) return round_convergent(c, frac_bits);
  throw PrecisionError("convergents do not reach " + std::to_string(frac_bits) + " fractional bits");
}

// ---------------------------------------------------------------------------
// eta

double estimate_eta(const std::vector<Convergent>& convs) {
  if (convs.size() < 4) throw ConfigError("estimate_eta needs at least 4 convergents");
  // pairs (i, i+1) with q_i > 1; the window is the trailing third of them
  const std::size_t pairs = convs.size() - 1;
  const std::size_t window = std::max<std::size_t>(2, pairs / 3);
  double best = 2.0;
  for (std::size_t i = pairs - std::min(window, pairs); i < pairs; ++i) {
    const auto& qi = convs[i].q;
    if (qi <= 1) continue;
    // a_{i+1} = (q_{i+1} - q_{i-1}) / q_i
    const BigInt q_before = i == 0 ? BigInt(0) : convs[i - 1].q;
    const BigInt a = (convs[i + 1].q - q_before) / qi;
    best = std::max(best, 2.0 + big_log(a) / big_log(qi));
  }
  return best;
}

// ---------------------------------------------------------------------------
// interval decisions

DistanceBounds distance_bounds(const FixedPointAlpha& alpha, const BigInt& p, const BigInt& q) {
  // alpha lies in (base - 1, base + 1) / 2^F (rounding error < 3/4 ulp)
  const BigInt base = (alpha.integer_part() << static_cast<mp_bitcnt_t>(alpha.frac_bits())) + alpha.value();
  const BigInt pF = p << static_cast<mp_bitcnt_t>(alpha.frac_bits());
  const BigInt mid = q * base - pF;
  const BigInt lo = mid - q;
  const BigInt hi = mid + q;
  DistanceBounds b;
  if (lo >= 0) {
    b.lower = lo;
    b.upper = hi;
  } else if (hi <= 0) {
    b.lower = -hi;
    b.upper = -lo;
  } else {
    b.lower = 0;
    b.upper = std::max(BigInt(-lo), hi);
  }
  return b;
}

Decision convergent_gap(const FixedPointAlpha& alpha, const Convergent& c, const BigInt& q_next) {
  // |q alpha - p| < 1/q_next  <=>  dist * q_next < 2^F
  const auto b = distance_bounds(alpha, c.p, c.q);
  const BigInt one = big_pow2(static_cast<std::uint64_t>(alpha.frac_bits()));
  if (b.upper * q_next < one) return Decision::holds;
  if (b.lower * q_next >= one) return Decision::fails;
  return Decision::undecided;
}

std::vector<GapCheck> check_convergent_gaps(const IrrationalSpec& spec, const std::vector<Convergent>& convs,
                                            std::size_t pairs, int base_frac_bits) {
  if (pairs + 1 > convs.size()) throw ConfigError("check_convergent_gaps: need q_{i+1} for every checked i");
  auto round64 = [](std::size_t bits) { return static_cast<int>((bits + 63) / 64 * 64); };
  // |q_i alpha - p_i| = 1/(q_{i+1} + q_i/alpha_{i+2}) sits a relative q_i/q_{i+2} below 1/q_{i+1},
  // so deciding it takes about bits(q_{i+1}) + bits(q_{i+2}) fractional bits
  std::vector<int> need(pairs);
  int top = base_frac_bits;
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t far = i + 2 < convs.size() ? bit_length(convs[i + 2].q)
                                                 : 2 * bit_length(convs[i + 1].q) - bit_length(convs[i].q);
    need[i] = std::max(base_frac_bits, round64(bit_length(convs[i + 1].q) + far + 16));
    top = std::max(top, need[i]);
  }
  const FixedPointAlpha fine = [&] {
    try {
      return alpha_fixed_point(convs, top);
    } catch (const PrecisionError&) {
      return alpha_fixed_point(spec, top);
    }
  }();

  std::vector<GapCheck> out;
  out.reserve(pairs);
  const FixedPointAlpha base = fine.rounded_to(base_frac_bits);
  for (std::size_t i = 0; i < pairs; ++i) {
    GapCheck g;
    g.index = i;
    g.frac_bits = base_frac_bits;
    g.decision = convergent_gap(base, convs[i], convs[i + 1].q);
    if (g.decision == Decision::undecided && need[i] > base_frac_bits) {
      g.frac_bits = std::min(need[i], top);
      g.decision = convergent_gap(fine.rounded_to(g.frac_bits), convs[i], convs[i + 1].q);
    }
    out.push_back(g);
  }
  return out;
}

Decision exceeds_power(const FixedPointAlpha& alpha, const BigInt& p, const BigInt& q, const Ratio& tau) {
  // |alpha - p/q| > q^-tau  <=>  |q alpha - p| > q^(1-tau)
  //                         <=>  dist^d q^(n-d) > 2^(F d)     (tau = n/d)
  const auto b = distance_bounds(alpha, p, q);
  const auto n = static_cast<std::uint64_t>(tau.num());
  const auto d = static_cast<std::uint64_t>(tau.den());
  const BigInt rhs = big_pow2(static_cast<std::uint64_t>(alpha.frac_bits()) * d);
  const BigInt qpow = big_pow(q, n - d);
  if (big_pow(b.lower, d) * qpow > rhs) return Decision::holds;
  if (big_pow(b.upper, d) * qpow <= rhs) return Decision::fails;
  return Decision::undecided;
}

// ---------------------------------------------------------------------------
// q selection

bool pow_less(const BigInt& a, std::uint64_t e1, const BigInt& b, std::uint64_t e2) {
  if (e1 == 0) return BigInt(1) < big_pow(b, e2);
  if (e2 == 0) return big_pow(a, e1) < 1;
  if (a <= 1 || b <= 1) return big_pow(a, e1) < big_pow(b, e2);
  // bit lengths settle almost every comparison without materialising powers
  const double la = static_cast<double>(e1), lb = static_cast<double>(e2);
  const double bla = static_cast<double>(bit_length(a)), blb = static_cast<double>(bit_length(b));
  if (la * bla <= lb * (blb - 1)) return true;
  if (lb * blb <= la * (bla - 1)) return false;
  const double lhs = la * big_log(a), rhs = lb * big_log(b);
  const double margin = 1e-9 * (std::abs(lhs) + std::abs(rhs)) + 1e-9;
  if (lhs + margin < rhs) return true;
  if (rhs + margin < lhs) return false;
  return big_pow(a, e1) < big_pow(b, e2);
}

std::vector<bool> check_qgrowth(const std::vector<Convergent>& convs, const Ratio& tau) {
  if (tau <= Ratio(1)) throw ConfigError("check_qgrowth: tau must exceed 1");
  const auto n = static_cast<std::uint64_t>(tau.num());
  const auto d = static_cast<std::uint64_t>(tau.den());
  std::vector<bool> out;
  for (std::size_t i = 1; i < convs.size(); ++i)
    out.push_back(pow_less(convs[i].q, d, convs[i - 1].q, n - d));  // q_i^d < q_{i-1}^(n-d)
  return out;
}

bool xq_range_holds(const BigInt& q, std::uint64_t x, const Ratio& tau) {
  const auto n = static_cast<std::uint64_t>(tau.num());
  const auto d = static_cast<std::uint64_t>(tau.den());
  const BigInt X = big_from_u64(x);
  // q < x^{(n-d)/n}  <=>  q^n < x^{n-d};  x/q < x^{(n-d)/n}  <=>  x^d < q^n
  return pow_less(q, n, X, n - d) && pow_less(X, d, q, n);
}

QSelection select_q(const IrrationalSpec& spec, std::uint64_t x, const Ratio& tau, int frac_bits) {
  if (tau <= Ratio(2)) throw ConfigError("select_q: tau must exceed 2, got " + tau.str());
  if (x < 2) throw ConfigError("select_q: x must be at least 2");
  const auto n = static_cast<std::uint64_t>(tau.num());
  const auto d = static_cast<std::uint64_t>(tau.den());
  const BigInt X = big_from_u64(x);
  const BigInt xd = big_pow(X, d);

  CfGenerator gen(spec);
  std::vector<Convergent> convs;
  std::optional<std::size_t> chosen;
  while (!chosen) {
    auto c = gen.next_convergent();
    if (!c)
      throw PrecisionError("select_q: x = " + std::to_string(x) + " is not straddled by any convergent pair of " +
                           spec.str());
    convs.push_back(std::move(*c));
    const std::size_t i = convs.size() - 1;
    if (i >= 1 && big_pow(convs[i].q, n) > xd && big_pow(convs[i - 1].q, n) <= xd) chosen = i;
  }

  QSelection sel;
  sel.tau = tau;
  sel.index = *chosen;
  sel.q = convs[sel.index].q;
  sel.p = convs[sel.index].p;
  sel.q_prev = convs[sel.index - 1].q;
  sel.p_prev = convs[sel.index - 1].p;
  sel.lower_ok = pow_less(sel.q, n, X, n - d);
  sel.upper_ok = pow_less(X, d, sel.q, n);
  sel.xrange_ok = sel.lower_ok && sel.upper_ok;

  // enclosure of alpha for the approximation check
  FixedPointAlpha alpha = [&] {
    try {
      return alpha_fixed_point(convs, frac_bits);
    } catch (const PrecisionError&) {
      return alpha_fixed_point(spec, frac_bits);
    }
  }();
  const auto dec = exceeds_power(alpha, sel.p_prev, sel.q_prev, tau);
  sel.approx_ok = dec == Decision::holds;
  sel.approx_decided = dec != Decision::undecided;
  return sel;
}

}  // namespace mexp
