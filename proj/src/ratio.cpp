#include "mexp/ratio.hpp"

#include <cmath>
#include <numeric>

#include "mexp/errors.hpp"
#include "strict_parse.hpp"

namespace mexp {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw CapacityError("rational overflow");
  return static_cast<std::int64_t>(v);
}

Ratio make(i128 num, i128 den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Ratio(narrow(num), narrow(den));
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Ratio Ratio::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Ratio(detail::parse_int64(text, "rational"));
  auto num = detail::parse_int64(text.substr(0, slash), "rational numerator");
  auto den_text = text.substr(slash + 1);
  if (!detail::is_strict_decimal(den_text, false))
    throw ConfigError("rational denominator must be a positive decimal integer: '" + std::string(text) + "'");
  auto den = detail::parse_int64(den_text, "rational denominator");
  if (den == 0) throw ConfigError("rational with zero denominator: '" + std::string(text) + "'");
  return Ratio(num, den);
}

std::string Ratio::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Ratio operator+(const Ratio& a, const Ratio& b) {
  return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Ratio operator-(const Ratio& a, const Ratio& b) {
  return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
}
Ratio operator*(const Ratio& a, const Ratio& b) {
  return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}
Ratio operator/(const Ratio& a, const Ratio& b) {
  if (b.num_ == 0) throw ConfigError("rational division by zero");
  return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
}

Ratio max(const Ratio& a, const Ratio& b) { return a < b ? b : a; }

Ratio ceil_to_denominator(double v, std::int64_t den) {
  return Ratio(static_cast<std::int64_t>(std::ceil(v * static_cast<double>(den))), den);
}

}  // namespace mexp
