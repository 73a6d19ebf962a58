#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace mexp {

/// Positive-denominator rational in lowest terms. Used for tau, eta and
/// epsilon so that exponent comparisons can be made exactly.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  /// Parses "N" or "N/D" (strict decimal, optional leading '-', no spaces).
  static Ratio parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Ratio operator+(const Ratio& a, const Ratio& b);
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend Ratio operator/(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio& a, const Ratio& b) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Ratio max(const Ratio& a, const Ratio& b);

/// Smallest rational with denominator `den` that is >= v.
Ratio ceil_to_denominator(double v, std::int64_t den);

}  // namespace mexp
