#include <cmath>
#include <limits>

#include "polysum/kernels.hpp"

namespace polysum::kernels {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kWindowHi = 0x1.0p500;
constexpr double kWindowLo = 0x1.0p-500;

// Rescale the accumulator into [1, 2) and absorb the shift into e.
// m is max(|re|, |im|) or a positive real accumulator, never 0.
inline void rewindow(double& re, double& im, double m, std::int64_t& e) {
  const int k = std::ilogb(m);
  re = std::ldexp(re, -k);
  im = std::ldexp(im, -k);
  e += k;
}

inline void rewindow(double& acc, std::int64_t& e) {
  const int k = std::ilogb(acc);
  acc = std::ldexp(acc, -k);
  e += k;
}

ExtComplex prod_diff_scalar(std::complex<double> z, const std::complex<double>* pts,
                            std::size_t n) {
  double ar = 1.0, ai = 0.0;
  std::int64_t e = 0;
  const double zr = z.real(), zi = z.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = zr - pts[i].real();
    const double di = zi - pts[i].imag();
    const double nr = ar * dr - ai * di;
    const double ni = ar * di + ai * dr;
    ar = nr;
    ai = ni;
    const double m = std::fmax(std::fabs(ar), std::fabs(ai));
    if (m > kWindowHi || m < kWindowLo) {
      if (m == 0.0) return ExtComplex::zero();  // exact root hit
      rewindow(ar, ai, m, e);
    }
  }
  return ext_normalize({ar, ai}, e);
}

std::complex<double> sum_inv_diff_scalar(std::complex<double> z,
                                         const std::complex<double>* pts,
                                         std::size_t n) {
  double sr = 0.0, si = 0.0;
  const double zr = z.real(), zi = z.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = zr - pts[i].real();
    const double di = zi - pts[i].imag();
    const double d2 = dr * dr + di * di;
    sr += dr / d2;
    si -= di / d2;
  }
  return {sr, si};
}

double sum_log_abs_diff_scalar(std::complex<double> z, const std::complex<double>* pts,
                               std::size_t n) {
  // Accumulates prod |z - p|^2 in a windowed product; one log at the end
  // instead of n of them.
  double acc = 1.0;
  std::int64_t e = 0;
  const double zr = z.real(), zi = z.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double dr = zr - pts[i].real();
    const double di = zi - pts[i].imag();
    acc *= dr * dr + di * di;
    if (acc > kWindowHi || acc < kWindowLo) {
      if (acc == 0.0) return -std::numeric_limits<double>::infinity();
      rewindow(acc, e);
    }
  }
  return 0.5 * (std::log(acc) + static_cast<double>(e) * kLn2);
}

double sum_log_plus_abs_scalar(const std::complex<double>* pts, std::size_t n) {
  double acc = 1.0;
  std::int64_t e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = pts[i].real(), im = pts[i].imag();
    acc *= std::fmax(re * re + im * im, 1.0);
    if (acc > kWindowHi) rewindow(acc, e);
  }
  return 0.5 * (std::log(acc) + static_cast<double>(e) * kLn2);
}

}  // namespace

const Funcs& scalar_funcs() {
  static const Funcs f{prod_diff_scalar, sum_inv_diff_scalar, sum_log_abs_diff_scalar,
                       sum_log_plus_abs_scalar};
  return f;
}

}  // namespace polysum::kernels
