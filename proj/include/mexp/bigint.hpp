#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

namespace mexp {

using BigInt = mpz_class;

inline BigInt big_from_u64(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

inline BigInt big_pow(const BigInt& base, std::uint64_t exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline BigInt big_pow2(std::uint64_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exp);
  return r;
}

inline std::size_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

/// Natural log of a positive big integer without overflowing a double.
double big_log(const BigInt& v);

/// Nearest double (may be inf for huge values).
inline double big_to_double(const BigInt& v) { return mpz_get_d(v.get_mpz_t()); }

inline std::string big_str(const BigInt& v) { return v.get_str(10); }

}  // namespace mexp
