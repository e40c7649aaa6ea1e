#pragma once

#include <complex>
#include <cstdint>

namespace polysum {

// Complex value man * 2^exp2 with a 64-bit binary exponent.  Normal form:
// either man == 0 and exp2 == 0, or 0.5 <= |man| < 1.  Products of
// thousands of factors with magnitudes far beyond double range stay
// finite; addition aligns exponents and drops an operand only when it is
// more than 2*53 bits below the other.
struct ExtComplex {
  std::complex<double> man{0.0, 0.0};
  std::int64_t exp2 = 0;

  static ExtComplex zero() { return {}; }
  static ExtComplex one() { return {{0.5, 0.0}, 1}; }
  static ExtComplex from(std::complex<double> z);
  static ExtComplex from(double x) { return from(std::complex<double>(x, 0.0)); }
  // exp(log_mag) * (cos(angle) + i sin(angle)) for log_mag of any size
  static ExtComplex from_polar_log(double log_mag, double angle);

  bool is_zero() const { return man.real() == 0.0 && man.imag() == 0.0; }
  // Saturates to +-infinity (componentwise) when the exponent exceeds
  // double range; exact whenever the value is representable.
  std::complex<double> to_complex() const;
};

// Exponent gap beyond which the smaller addend cannot affect the sum.
inline constexpr std::int64_t kExtAlignBits = 106;  // 2 * DBL_MANT_DIG

ExtComplex ext_normalize(std::complex<double> man, std::int64_t exp2);
ExtComplex ext_mul(const ExtComplex& a, const ExtComplex& b);
ExtComplex ext_add(const ExtComplex& a, const ExtComplex& b);
inline ExtComplex ext_neg(const ExtComplex& a) { return {-a.man, a.exp2}; }
inline ExtComplex ext_sub(const ExtComplex& a, const ExtComplex& b) {
  return ext_add(a, ext_neg(b));
}
ExtComplex ext_div(const ExtComplex& a, const ExtComplex& b);

// log |a|; -infinity for zero
double ext_log_abs(const ExtComplex& a);
double ext_arg(const ExtComplex& a);

// |a| > |b|, exact in the extended representation
bool ext_abs_greater(const ExtComplex& a, const ExtComplex& b);

// a/b as an ordinary complex number with the quotient exponent clamped to
// +-clamp_exp2, for scale-free ratios (Newton corrections, winding
// integrands) where saturation is preferable to infinities.
std::complex<double> ext_ratio(const ExtComplex& a, const ExtComplex& b,
                               std::int64_t clamp_exp2 = 600);

}  // namespace polysum
