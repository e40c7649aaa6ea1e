#include "polysum/extnum.hpp"

#include <cmath>
#include <limits>

namespace polysum {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

// ldexp with a 64-bit shift; values shifted past double range saturate.
inline double ldexp_wide(double x, std::int64_t e) {
  if (e > 3000) e = 3000;
  if (e < -3000) e = -3000;
  return std::ldexp(x, static_cast<int>(e));
}

}  // namespace

ExtComplex ext_normalize(std::complex<double> m, std::int64_t e) {
  double re = m.real();
  double im = m.imag();
  if (re == 0.0 && im == 0.0) return ExtComplex::zero();
  // Bring the dominant component into [1, 2) first so that hypot cannot
  // overflow, then shift by the measured modulus.
  const int ce = std::ilogb(std::fmax(std::fabs(re), std::fabs(im)));
  re = std::ldexp(re, -ce);
  im = std::ldexp(im, -ce);
  double mod = std::hypot(re, im);  // in [1, 2*sqrt(2))
  int k = mod >= 2.0 ? 2 : 1;
  re = std::ldexp(re, -k);
  im = std::ldexp(im, -k);
  // One rounding-boundary fixup keeps the measured modulus in [0.5, 1).
  mod = std::hypot(re, im);
  if (mod < 0.5) {
    re *= 2.0;
    im *= 2.0;
    --k;
  } else if (mod >= 1.0) {
    re *= 0.5;
    im *= 0.5;
    ++k;
  }
  return {{re, im}, e + ce + k};
}

ExtComplex ExtComplex::from(std::complex<double> z) { return ext_normalize(z, 0); }

ExtComplex ExtComplex::from_polar_log(double log_mag, double angle) {
  const double e = std::floor(log_mag / kLn2);
  const double frac = std::fma(-e, kLn2, log_mag);
  const double mag = std::exp(frac);  // in [1, 2] up to rounding
  return ext_normalize({mag * std::cos(angle), mag * std::sin(angle)},
                       static_cast<std::int64_t>(e));
}

std::complex<double> ExtComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  return {ldexp_wide(man.real(), exp2), ldexp_wide(man.imag(), exp2)};
}

ExtComplex ext_mul(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero() || b.is_zero()) return ExtComplex::zero();
  const double re = a.man.real() * b.man.real() - a.man.imag() * b.man.imag();
  const double im = a.man.real() * b.man.imag() + a.man.imag() * b.man.real();
  return ext_normalize({re, im}, a.exp2 + b.exp2);
}

ExtComplex ext_add(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const ExtComplex* hi = &a;
  const ExtComplex* lo = &b;
  if (b.exp2 > a.exp2) {
    hi = &b;
    lo = &a;
  }
  const std::int64_t gap = hi->exp2 - lo->exp2;
  if (gap > kExtAlignBits) return *hi;
  const int g = static_cast<int>(gap);
  const std::complex<double> sum{hi->man.real() + std::ldexp(lo->man.real(), -g),
                                 hi->man.imag() + std::ldexp(lo->man.imag(), -g)};
  return ext_normalize(sum, hi->exp2);
}

ExtComplex ext_div(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero()) return ExtComplex::zero();
  return ext_normalize(a.man / b.man, a.exp2 - b.exp2);
}

double ext_log_abs(const ExtComplex& a) {
  if (a.is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(a.man)) + static_cast<double>(a.exp2) * kLn2;
}

double ext_arg(const ExtComplex& a) { return std::arg(a.man); }

bool ext_abs_greater(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero()) return false;
  if (b.is_zero()) return true;
  if (a.exp2 != b.exp2) return a.exp2 > b.exp2;
  return std::norm(a.man) > std::norm(b.man);
}

std::complex<double> ext_ratio(const ExtComplex& a, const ExtComplex& b,
                               std::int64_t clamp_exp2) {
  if (a.is_zero()) return {0.0, 0.0};
  const ExtComplex q = ext_div(a, b);
  std::int64_t e = q.exp2;
  if (e > clamp_exp2) e = clamp_exp2;
  if (e < -clamp_exp2) e = -clamp_exp2;
  return {ldexp_wide(q.man.real(), e), ldexp_wide(q.man.imag(), e)};
}

}  // namespace polysum
