#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace mexp {

/// Unit roundoff of binary64.
inline constexpr double kUnitRoundoff = 0x1p-53;

/// Bound on |computed e(theta) - e(theta)| from unit_phase with a fixed-point
/// phase: quarter-turn reduction keeps the argument error below 2.4u and each
/// of cos/sin contributes at most one ulp.
inline constexpr double kUnitPhaseErr = 5 * kUnitRoundoff;

/// A complex sum with its summand count and a bound on accumulated error.
struct ComplexSum {
  double re = 0.0;
  double im = 0.0;
  std::uint64_t terms = 0;
  double err_bound = 0.0;

  std::complex<double> value() const { return {re, im}; }
  double abs() const { return std::hypot(re, im); }
};

/// Neumaier (Kahan-Babuska) summation of real and imaginary parts, carrying
/// the caller-supplied error of each summand.
class CompensatedSum {
 public:
  void add(std::complex<double> z, double z_err) {
    step(re_, re_c_, z.real());
    step(im_, im_c_, z.imag());
    abs_total_ += std::abs(z.real()) + std::abs(z.imag());
    summand_err_ += z_err;
    ++terms_;
  }

  /// Fold another partial sum in; exact two-sum on the leading parts.
  void merge(const CompensatedSum& o) {
    re_c_ += o.re_c_ + two_sum_err(re_, o.re_);
    im_c_ += o.im_c_ + two_sum_err(im_, o.im_);
    abs_total_ += o.abs_total_;
    summand_err_ += o.summand_err_;
    terms_ += o.terms_;
  }

  ComplexSum result() const {
    ComplexSum r;
    r.re = re_ + re_c_;
    r.im = im_ + im_c_;
    r.terms = terms_;
    const double n = static_cast<double>(terms_);
    r.err_bound = summand_err_ + 2 * kUnitRoundoff * (std::abs(r.re) + std::abs(r.im)) +
                  4 * n * kUnitRoundoff * kUnitRoundoff * abs_total_;
    return r;
  }

  std::uint64_t terms() const { return terms_; }

 private:
  static void step(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  // s += x, returns the rounding error of that addition
  static double two_sum_err(double& s, double x) {
    const double t = s + x;
    const double bp = t - s;
    const double err = (s - (t - bp)) + (x - bp);
    s = t;
    return err;
  }

  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
  double abs_total_ = 0, summand_err_ = 0;
  std::uint64_t terms_ = 0;
};

/// Pairwise reduction in index order: the tree shape depends only on
/// parts.size(), never on how the parts were scheduled.
inline CompensatedSum tree_reduce(std::vector<CompensatedSum> parts) {
  if (parts.empty()) return {};
  while (parts.size() > 1) {
    std::vector<CompensatedSum> next((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next[i / 2] = parts[i];
      next[i / 2].merge(parts[i + 1]);
    }
    if (parts.size() % 2) next.back() = parts.back();
    parts = std::move(next);
  }
  return parts.front();
}

}  // namespace mexp
