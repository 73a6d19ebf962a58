#include <random>
#include <ranges>

#include "doctest.h"
#include "mexp/analysis.hpp"
#include "mexp/errors.hpp"
#include "oracles.hpp"

using namespace mexp;

namespace {

// The encoded value itself, lifted to 100 digits.
oracle::HiFloat hi(const FixedPointAlpha& a) { return oracle::from_scaled(a.value().get_str(), a.frac_bits()); }

const SieveTables& tables() {
  static const SieveTables t = build_tables(1100000);
  return t;
}

const IrrationalSpec kSqrt2 = IrrationalSpec::parse("quad:2");

}  // namespace

TEST_CASE("lemma1 with M = 1 is a single geometric sum") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto sel = select_q(kSqrt2, 10000, Ratio(5, 2));
  const auto r = lemma1_check(10000, 1, a, sel);
  const double norm = dist_to_int(signed_phase(a, 1));
  CHECK(r.lhs <= std::min(10000.0, 1 / (2 * norm)) + r.lhs_err);
  CHECK(r.rhs > 0);
  CHECK(r.ratio == doctest::Approx(r.lhs / r.rhs));
  CHECK(!r.N);
}

TEST_CASE("lemma1 lhs against the double loop") {
  for (const char* spec : {"quad:2", "golden", "liouville:3"}) {
    const auto s = IrrationalSpec::parse(spec);
    const auto a = alpha_fixed_point(s);
    for (std::uint64_t x : {100, 1000, 10000}) {
      const auto M = ceil_x_two_fifths(x);
      const auto r = lemma1_check(x, M, a, select_q(s, x, default_tau(sweep_eta(s))));
      const auto ref = static_cast<double>(oracle::lemma1_lhs(hi(a), x, M));
      CAPTURE(spec);
      CAPTURE(x);
      CHECK(std::abs(r.lhs - ref) < 1e-8);
      CHECK(std::abs(r.lhs - ref) <= r.lhs_err + 1e-12);
    }
  }
}

TEST_CASE("lemma1 at x = 1e5") {
  const std::uint64_t x = 100000;
  const auto a = alpha_fixed_point(kSqrt2);
  const auto M = ceil_x_two_fifths(x);
  CHECK(M == 100);
  const auto r = lemma1_check(x, M, a, select_q(kSqrt2, x, Ratio(5, 2)));
  CHECK(std::abs(r.lhs - static_cast<double>(oracle::lemma1_lhs(hi(a), x, M))) < 1e-8);
}

TEST_CASE("lemma1 ratio is invariant under integer shifts") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto sel = select_q(kSqrt2, 5000, Ratio(5, 2));
  CHECK(lemma1_check(5000, 30, a, sel).ratio == lemma1_check(5000, 30, a.shifted(BigInt(1)), sel).ratio);
}

TEST_CASE("lemma2 empty region") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto sel = select_q(kSqrt2, 1000, Ratio(5, 2));
  const std::uint64_t M = 5, N = 7;
  const auto r = lemma2_check((M + 1) * (N + 1) - 1, M, N, a, sel, SequenceChoice::ones, tables());
  CHECK(r.lhs == 0);
  CHECK(r.rhs > 0);
  CHECK(lemma2_check((M + 1) * (N + 1), M, N, a, sel, SequenceChoice::ones, tables()).lhs > 0);
}

TEST_CASE("lemma2 all-ones matches both loop orders") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto h = hi(a);
  const std::uint64_t x = 500, M = 5, N = 5;
  const auto r = lemma2_check(x, M, N, a, select_q(kSqrt2, x, Ratio(5, 2)), SequenceChoice::ones, tables());
  std::complex<long double> mn = 0, nm = 0;
  for (std::uint64_t m = M + 1; m <= x; ++m)
    for (std::uint64_t n = N + 1; m * n <= x; ++n) mn += oracle::e_hi(h, m * n);
  for (std::uint64_t n = N + 1; n <= x; ++n)
    for (std::uint64_t m = M + 1; m * n <= x; ++m) nm += oracle::e_hi(h, m * n);
  CHECK(std::abs(r.lhs - static_cast<double>(std::abs(mn))) <= r.lhs_err);
  CHECK(std::abs(r.lhs - static_cast<double>(std::abs(nm))) <= r.lhs_err);
}

TEST_CASE("lemma2 mobius sequences") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto h = hi(a);
  const auto mu = oracle::mobius_table(3000);
  const std::uint64_t x = 3000, M = 9, N = 12;
  const auto r = lemma2_check(x, M, N, a, select_q(kSqrt2, x, Ratio(5, 2)), SequenceChoice::mobius, tables());
  std::complex<long double> ref = 0;
  for (std::uint64_t m = M + 1; m <= x; ++m)
    for (std::uint64_t n = N + 1; m * n <= x; ++n)
      if (mu[m] * mu[n]) ref += static_cast<long double>(mu[m] * mu[n]) * oracle::e_hi(h, m * n);
  CHECK(std::abs(r.lhs - static_cast<double>(std::abs(ref))) <= r.lhs_err);
  CHECK(r.N == N);
}

TEST_CASE("lemma2 seeded random sequences are deterministic") {
  const auto a = alpha_fixed_point(kSqrt2);
  const auto sel = select_q(kSqrt2, 20000, Ratio(5, 2));
  ExecConfig c1, c3;
  c1.workers = 1;
  c3.workers = 3;
  c1.coeff_leaf = c3.coeff_leaf = 64;
  const auto r1 = lemma2_check(20000, 10, 10, a, sel, SequenceChoice::random_unit, tables(), 42, c1);
  const auto r2 = lemma2_check(20000, 10, 10, a, sel, SequenceChoice::random_unit, tables(), 42, c3);
  const auto r3 = lemma2_check(20000, 10, 10, a, sel, SequenceChoice::random_unit, tables(), 43, c1);
  CHECK(r1.lhs == r2.lhs);
  CHECK(r1.lhs != r3.lhs);
  const auto seq = lemma2_sequence(SequenceChoice::random_unit, 100, tables(), 42, 0);
  for (const auto& z : seq | std::views::drop(1))
    CHECK(std::abs(z) == doctest::Approx(1.0));
}

TEST_CASE("sequence choice names") {
  for (auto s : {SequenceChoice::mobius, SequenceChoice::ones, SequenceChoice::random_unit})
    CHECK(parse_sequence_choice(to_string(s)) == s);
  CHECK_THROWS_AS(parse_sequence_choice("Mobius"), ConfigError);
}

TEST_CASE("proposition bounds") {
  // epsilon = 0, q = floor(sqrt x): t1 = (MN + x/q + q) log(2qx) = (MN + 2 sqrt x) log(2qx)
  const std::uint64_t x = 1000000, M = 251, N = 251;
  const auto b = proposition_bounds(x, M, N, BigInt(1000), 0.0);
  CHECK(b.t1_bound == doctest::Approx((251.0 * 251.0 + 2000.0) * std::log(2e9)));
  CHECK(b.t2_bound ==
        doctest::Approx(std::sqrt(2 * 1e6 / 251.0 + 2000.0) * 1000.0 * std::log(1e6) * std::log(1e6)));

  // golden, x = 1e6, tau = 21/10: q = 987
  const auto sel = select_q(IrrationalSpec::parse("golden"), x, Ratio(21, 10));
  REQUIRE(sel.q == 987);
  const auto g = proposition_bounds(x, M, N, sel.q, 0.05);
  CHECK(g.t1_bound == doctest::Approx((251.0 * 251.0 + 1e6 / 987 + 987) * std::pow(1e6, 0.05) * std::log(2 * 987e6)));

  // majorization with M = N = x^(2/5) and q, x/q < x^(1-1/tau)
  for (std::uint64_t xx : {10000, 100000, 1000000}) {
    const Ratio tau(5, 2);
    const auto s = select_q(kSqrt2, xx, tau);
    REQUIRE(s.xrange_ok);
    const auto m = ceil_x_two_fifths(xx);
    const double xd = static_cast<double>(xx), q = s.q.get_d();
    const auto pb = proposition_bounds(xx, m, m, s.q, 0.05);
    const double major = (std::pow(xd, 0.8) + std::pow(xd, 1 - 1 / tau.value())) * std::pow(xd, 0.05) *
                         std::log(2 * q * xd);
    CHECK(pb.t1_bound <= 3 * major * (static_cast<double>(m * m) / std::pow(xd, 0.8)));
  }
  CHECK_THROWS_AS(proposition_bounds(x, M, N, BigInt(1000), -0.1), ConfigError);
}

TEST_CASE("theorem exponent") {
  CHECK(theorem_exponent(Ratio(4)) == Ratio(7, 8));
  CHECK(theorem_exponent(Ratio(3)) == Ratio(5, 6));
  CHECK(theorem_exponent(Ratio(2)) == Ratio(4, 5));
  CHECK(theorem_exponent(Ratio(5, 2)) == Ratio(4, 5));
  CHECK(large_eta_branch(Ratio(5, 2)) == Ratio(4, 5));
  Ratio prev = theorem_exponent(Ratio(5, 2));
  for (int k = 251; k <= 1000; k += 7) {
    const auto cur = theorem_exponent(Ratio(k, 100));
    CHECK(prev <= cur);
    prev = cur;
  }
  CHECK_THROWS_AS(theorem_exponent(Ratio(3, 2)), ConfigError);
}

TEST_CASE("ceil_x_two_fifths is exact") {
  for (std::uint64_t x = 1; x < 5000; ++x) {
    const auto m = ceil_x_two_fifths(x);
    CHECK(big_pow(big_from_u64(m), 5) >= big_pow(big_from_u64(x), 2));
    CHECK(big_pow(big_from_u64(m - 1), 5) < big_pow(big_from_u64(x), 2));
  }
  CHECK(ceil_x_two_fifths(100000) == 100);
  CHECK(ceil_x_two_fifths(100001) == 101);
  CHECK(ceil_x_two_fifths(1000) == 16);
}

TEST_CASE("theorem sweep rows") {
  SweepOptions opt;
  opt.with_lemmas = true;
  const std::vector<std::uint64_t> xs{10000, 100000, 1000000};
  const auto rows = theorem_sweep(kSqrt2, xs, tables(), opt);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.x == xs[i]);
    CHECK(r.eta == Ratio(2));
    CHECK(r.tau == Ratio(5, 2));
    CHECK(r.pred_exponent == doctest::Approx(0.85));
    CHECK(r.emp_exponent < 0.85);
    CHECK(r.error.empty());
    CHECK(r.q);
    CHECK(r.xrange_ok);
    CHECK(r.lemma1_ratio.value() > 0);
    CHECK(r.lemma2_ratio.value() > 0);
    CHECK(r.abs_sum == mobius_sum(r.x, alpha_fixed_point(kSqrt2), tables()).abs());
  }
  // pure function of its inputs
  const auto again = theorem_sweep(kSqrt2, xs, tables(), opt);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].abs_sum == rows[i].abs_sum);
    CHECK(again[i].lemma2_ratio == rows[i].lemma2_ratio);
  }

  const auto l4 = theorem_sweep(IrrationalSpec::parse("liouville:4"), {10000}, tables());
  CHECK(l4[0].pred_exponent == doctest::Approx(7.0 / 8 + 0.05));
  CHECK(l4[0].eta == Ratio(4));
  CHECK(l4[0].tau == Ratio(41, 10));

  const auto golden = theorem_sweep(IrrationalSpec::parse("golden"), {100}, tables());
  CHECK(golden[0].eta == Ratio(2));
  CHECK_THROWS_AS(theorem_sweep(kSqrt2, {tables().limit() + 1}, tables()), RangeError);
}

TEST_CASE("sweep at the smallest x") {
  SweepOptions opt;
  opt.tau = Ratio(5, 2);
  const auto rows = theorem_sweep(kSqrt2, {2, 10000}, tables(), opt);
  REQUIRE(rows.size() == 2);
  // q_0 = 1 <= 2^(2/5) < q_1 = 2
  CHECK(rows[0].error.empty());
  CHECK(*rows[0].q == 2);
  CHECK(rows[1].error.empty());
}

TEST_CASE("sweep eta for explicit continued fractions") {
  // bounded partial quotients: estimate close to 2, rounded up to 1/100
  const auto eta = sweep_eta(IrrationalSpec::parse("cf:1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2,1,2"));
  CHECK(eta.den() <= 100);
  CHECK(eta.value() == doctest::Approx(2.0).epsilon(0.05));
}
