#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mexp {

/// mu(n) for 1 <= n <= limit, stored as signed bytes. Index 0 is unused.
class MobiusTable {
 public:
  MobiusTable() = default;
  MobiusTable(std::uint32_t limit, std::vector<std::int8_t> values)
      : limit_(limit), values_(std::move(values)) {}

  std::uint32_t limit() const { return limit_; }
  int operator[](std::uint64_t n) const { return values_[n]; }
  int at(std::uint64_t n) const;
  std::span<const std::int8_t> values() const { return values_; }

 private:
  std::uint32_t limit_ = 0;
  std::vector<std::int8_t> values_;
};

/// Smallest prime factor for 2 <= n <= limit; entries 0 and 1 are 0.
class SpfTable {
 public:
  SpfTable() = default;
  SpfTable(std::uint32_t limit, std::vector<std::uint32_t> spf) : limit_(limit), spf_(std::move(spf)) {}

  std::uint32_t limit() const { return limit_; }
  std::uint32_t operator[](std::uint64_t n) const { return spf_[n]; }
  std::span<const std::uint32_t> values() const { return spf_; }

 private:
  std::uint32_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

struct SieveTables {
  MobiusTable mobius;
  SpfTable spf;

  std::uint32_t limit() const { return mobius.limit(); }
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;  // 2 GiB

/// Bytes build_tables(limit) will allocate (mu + spf + prime list estimate).
std::size_t sieve_memory_estimate(std::uint64_t limit);

/// Linear sieve. Throws CapacityError if the tables would exceed
/// `memory_budget` bytes or limit does not fit a 32-bit spf entry.
SieveTables build_tables(std::uint64_t limit, std::size_t memory_budget = kDefaultMemoryBudget);

struct PrimePower {
  std::uint32_t prime;
  int exponent;
};

/// Fixed-capacity factorization; any k below 2^32 has at most 9 distinct primes.
struct Factorization {
  std::array<PrimePower, 10> items{};
  std::size_t size = 0;

  std::span<const PrimePower> span() const { return {items.data(), size}; }
  std::uint64_t divisor_count() const;
};

/// Factorization of k via repeated spf lookups, primes ascending.
Factorization factor(std::uint64_t k, const SpfTable& spf);
std::vector<PrimePower> factorize(std::uint64_t k, const SpfTable& spf);

std::uint64_t divisor_count(std::uint64_t k, const SpfTable& spf);

/// Calls fn(d) for every positive divisor d of k (unordered).
template <class Fn>
void for_each_divisor(std::span<const PrimePower> factors, Fn&& fn, std::uint64_t d = 1, std::size_t at = 0) {
  if (at == factors.size()) {
    fn(d);
    return;
  }
  for (int e = 0; e <= factors[at].exponent; ++e) {
    for_each_divisor(factors, fn, d, at + 1);
    d *= factors[at].prime;
  }
}

struct CoeffQuery {
  std::uint64_t k = 1;
  std::uint64_t M = 0;
  std::uint64_t N = 0;
};

/// Exact: both n <= N and k/n <= M (what the four-region split produces).
/// Literal: only n <= N, as the coefficient is usually written.
enum class GammaVariant { exact, literal };

/// gamma(k) = sum over n | k, n <= N [, k/n <= M] of mu(n) mu(k/n).
std::int64_t gamma_coeff(const CoeffQuery& query, const SieveTables& tables,
                         GammaVariant variant = GammaVariant::exact);

/// tau(k, M) = sum over m | k, m > M of mu(m). Uses query.k and query.M.
std::int64_t tau_coeff(const CoeffQuery& query, const SieveTables& tables);

// Same coefficients from an existing factorization of k; no range checks.
std::int64_t gamma_coeff(std::uint64_t k, std::uint64_t M, std::uint64_t N, std::span<const PrimePower> factors,
                         const MobiusTable& mobius, GammaVariant variant);
std::int64_t tau_coeff(std::uint64_t M, std::span<const PrimePower> factors, const MobiusTable& mobius);

}  // namespace mexp
