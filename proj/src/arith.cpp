#include "mexp/arith.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mexp/errors.hpp"

namespace mexp {

namespace {

void check_range(std::uint64_t k, std::uint32_t limit) {
  if (k == 0 || k > limit)
    throw RangeError("argument " + std::to_string(k) + " outside sieve range 1.." + std::to_string(limit));
}

}  // namespace

int MobiusTable::at(std::uint64_t n) const {
  check_range(n, limit_);
  return values_[n];
}

std::size_t sieve_memory_estimate(std::uint64_t limit) {
  const double n = static_cast<double>(limit);
  // pi(n) < 1.25506 n / ln n for n > 1
  const double primes = limit < 17 ? 7.0 : 1.25506 * n / std::log(n);
  return static_cast<std::size_t>((n + 1) * (sizeof(std::int8_t) + sizeof(std::uint32_t)) +
                                  primes * sizeof(std::uint32_t));
}

SieveTables build_tables(std::uint64_t limit, std::size_t memory_budget) {
  if (limit == 0) throw ConfigError("sieve limit must be at least 1");
  if (limit >= std::numeric_limits<std::uint32_t>::max())
    throw CapacityError("sieve limit " + std::to_string(limit) + " does not fit 32-bit spf entries");
  const std::size_t need = sieve_memory_estimate(limit);
  if (need > memory_budget)
    throw CapacityError("sieve to " + std::to_string(limit) + " needs ~" + std::to_string(need >> 20) +
                        " MiB, budget is " + std::to_string(memory_budget >> 20) + " MiB");

  const auto n = static_cast<std::uint32_t>(limit);
  std::vector<std::int8_t> mu(std::size_t{n} + 1, 0);
  std::vector<std::uint32_t> spf(std::size_t{n} + 1, 0);
  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(n < 17 ? 7 : 1.25506 * n / std::log(double(n))));

  mu[1] = 1;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (spf[i] == 0) {
      spf[i] = i;
      mu[i] = -1;
      primes.push_back(i);
    }
    const std::uint32_t lp = spf[i];
    const std::uint64_t bound = n / i;
    for (std::uint32_t p : primes) {
      if (p > lp || p > bound) break;
      const std::size_t ip = std::size_t{i} * p;
      spf[ip] = p;
      mu[ip] = p == lp ? 0 : static_cast<std::int8_t>(-mu[i]);
    }
  }
  return {MobiusTable(n, std::move(mu)), SpfTable(n, std::move(spf))};
}

std::uint64_t Factorization::divisor_count() const {
  std::uint64_t d = 1;
  for (const auto& f : span()) d *= static_cast<std::uint64_t>(f.exponent + 1);
  return d;
}

Factorization factor(std::uint64_t k, const SpfTable& spf) {
  check_range(k, spf.limit());
  Factorization out;
  while (k > 1) {
    const std::uint32_t p = spf[k];
    int e = 0;
    do {
      k /= p;
      ++e;
    } while (k % p == 0);
    out.items[out.size++] = {p, e};
  }
  return out;
}

std::vector<PrimePower> factorize(std::uint64_t k, const SpfTable& spf) {
  const auto f = factor(k, spf);
  return {f.span().begin(), f.span().end()};
}

std::uint64_t divisor_count(std::uint64_t k, const SpfTable& spf) { return factor(k, spf).divisor_count(); }

std::int64_t gamma_coeff(std::uint64_t k, std::uint64_t M, std::uint64_t N, std::span<const PrimePower> factors,
                         const MobiusTable& mobius, GammaVariant variant) {
  // mu(n) mu(k/n) vanishes unless every exponent of k is <= 2.
  for (const auto& f : factors)
    if (f.exponent > 2) return 0;
  std::int64_t sum = 0;
  for_each_divisor(factors, [&](std::uint64_t n) {
    if (n > N) return;
    const std::uint64_t cofactor = k / n;
    if (variant == GammaVariant::exact && cofactor > M) return;
    sum += mobius[n] * mobius[cofactor];
  });
  return sum;
}

std::int64_t tau_coeff(std::uint64_t M, std::span<const PrimePower> factors, const MobiusTable& mobius) {
  std::int64_t sum = 0;
  for_each_divisor(factors, [&](std::uint64_t m) {
    if (m > M) sum += mobius[m];
  });
  return sum;
}

std::int64_t gamma_coeff(const CoeffQuery& query, const SieveTables& tables, GammaVariant variant) {
  const auto f = factor(query.k, tables.spf);
  return gamma_coeff(query.k, query.M, query.N, f.span(), tables.mobius, variant);
}

std::int64_t tau_coeff(const CoeffQuery& query, const SieveTables& tables) {
  const auto f = factor(query.k, tables.spf);
  return tau_coeff(query.M, f.span(), tables.mobius);
}

}  // namespace mexp
