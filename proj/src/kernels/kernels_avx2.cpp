// AVX2 + FMA variants of the kernel inner loops.  Compiled only when the
// toolchain targets x86-64 (see CMakeLists); selected at runtime after a
// cpuid check.
//
// Register layout: complex accumulators live interleaved, two complex
// lanes per 256-bit register, four independent lanes across two
// registers.  Each complex lane carries its own binary exponent; the
// window check runs every step and the (rare) rescale falls back to
// scalar fixup of the spilled lanes.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "polysum/kernels.hpp"

namespace polysum::kernels {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kWindowHi = 0x1.0p500;
constexpr double kWindowLo = 0x1.0p-500;

// complex multiply, two lanes per register: (a.re*b.re - a.im*b.im,
// a.re*b.im + a.im*b.re)
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d bre = _mm256_movedup_pd(b);
  const __m256d bim = _mm256_permute_pd(b, 0xF);
  const __m256d aswap = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, bre, _mm256_mul_pd(aswap, bim));
}

inline __m256d abs_pd(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
  return _mm256_and_pd(x, mask);
}

// max(|re|, |im|) duplicated into both slots of each complex lane
inline __m256d lane_mag(__m256d x) {
  const __m256d a = abs_pd(x);
  return _mm256_max_pd(a, _mm256_permute_pd(a, 0x5));
}

inline bool out_of_window(__m256d mag) {
  const __m256d hi = _mm256_cmp_pd(mag, _mm256_set1_pd(kWindowHi), _CMP_GT_OQ);
  const __m256d lo = _mm256_cmp_pd(mag, _mm256_set1_pd(kWindowLo), _CMP_LT_OQ);
  return _mm256_movemask_pd(_mm256_or_pd(hi, lo)) != 0;
}

// Scalar fixup of one spilled complex lane; returns false when the lane is
// exactly zero (the whole product is zero).
inline bool rewindow_lane(double& re, double& im, std::int64_t& e) {
  const double m = std::fmax(std::fabs(re), std::fabs(im));
  if (m == 0.0) return false;
  if (m > kWindowHi || m < kWindowLo) {
    const int k = std::ilogb(m);
    re = std::ldexp(re, -k);
    im = std::ldexp(im, -k);
    e += k;
  }
  return true;
}

ExtComplex prod_diff_avx2(std::complex<double> z, const std::complex<double>* pts,
                          std::size_t n) {
  const double* p = reinterpret_cast<const double*>(pts);
  const __m256d zv = _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
  __m256d acc01 = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
  __m256d acc23 = acc01;
  std::int64_t le[4] = {0, 0, 0, 0};
  bool zero = false;

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d01 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i));
    const __m256d d23 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i + 4));
    acc01 = cmul(acc01, d01);
    acc23 = cmul(acc23, d23);
    if (out_of_window(lane_mag(acc01)) || out_of_window(lane_mag(acc23))) {
      alignas(32) double buf[8];
      _mm256_store_pd(buf, acc01);
      _mm256_store_pd(buf + 4, acc23);
      for (int l = 0; l < 4; ++l) {
        if (!rewindow_lane(buf[2 * l], buf[2 * l + 1], le[l])) {
          zero = true;
          break;
        }
      }
      if (zero) break;
      acc01 = _mm256_load_pd(buf);
      acc23 = _mm256_load_pd(buf + 4);
    }
  }
  if (zero) return ExtComplex::zero();

  alignas(32) double buf[8];
  _mm256_store_pd(buf, acc01);
  _mm256_store_pd(buf + 4, acc23);
  ExtComplex result = ExtComplex::one();
  for (int l = 0; l < 4; ++l) {
    result = ext_mul(result, ext_normalize({buf[2 * l], buf[2 * l + 1]}, le[l]));
  }
  for (; i < n; ++i) {
    result = ext_mul(result, ExtComplex::from(z - pts[i]));
  }
  return result;
}

// squared moduli of four consecutive differences, in lane order
// [n0, n2, n1, n3]
inline __m256d norms4(__m256d d01, __m256d d23) {
  return _mm256_hadd_pd(_mm256_mul_pd(d01, d01), _mm256_mul_pd(d23, d23));
}

std::complex<double> sum_inv_diff_avx2(std::complex<double> z,
                                       const std::complex<double>* pts,
                                       std::size_t n) {
  const double* p = reinterpret_cast<const double*>(pts);
  const __m256d zv = _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
  const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  __m256d acc01 = _mm256_setzero_pd();
  __m256d acc23 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d01 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i));
    const __m256d d23 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i + 4));
    const __m256d q = norms4(d01, d23);
    const __m256d n01 = _mm256_permute4x64_pd(q, 0xA0);  // [n0 n0 n1 n1]
    const __m256d n23 = _mm256_permute4x64_pd(q, 0xF5);  // [n2 n2 n3 n3]
    acc01 = _mm256_add_pd(acc01, _mm256_div_pd(_mm256_xor_pd(d01, conj_mask), n01));
    acc23 = _mm256_add_pd(acc23, _mm256_div_pd(_mm256_xor_pd(d23, conj_mask), n23));
  }
  const __m256d acc = _mm256_add_pd(acc01, acc23);
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double sr = buf[0] + buf[2];
  double si = buf[1] + buf[3];
  for (; i < n; ++i) {
    const double dr = z.real() - pts[i].real();
    const double di = z.imag() - pts[i].imag();
    const double d2 = dr * dr + di * di;
    sr += dr / d2;
    si -= di / d2;
  }
  return {sr, si};
}

// Windowed product over four independent real lanes; used by both log
// kernels below.
struct RealProduct {
  __m256d acc = _mm256_set1_pd(1.0);
  std::int64_t le[4] = {0, 0, 0, 0};
  bool zero = false;

  inline void multiply(__m256d factors) {
    acc = _mm256_mul_pd(acc, factors);
    const __m256d hi = _mm256_cmp_pd(acc, _mm256_set1_pd(kWindowHi), _CMP_GT_OQ);
    const __m256d lo = _mm256_cmp_pd(acc, _mm256_set1_pd(kWindowLo), _CMP_LT_OQ);
    if (_mm256_movemask_pd(_mm256_or_pd(hi, lo)) != 0) spill();
  }

  void spill() {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    for (int l = 0; l < 4; ++l) {
      if (buf[l] == 0.0) {
        zero = true;
        return;
      }
      if (buf[l] > kWindowHi || buf[l] < kWindowLo) {
        const int k = std::ilogb(buf[l]);
        buf[l] = std::ldexp(buf[l], -k);
        le[l] += k;
      }
    }
    acc = _mm256_load_pd(buf);
  }

  // sum of lane logs
  double log_sum() const {
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    double s = 0.0;
    for (int l = 0; l < 4; ++l) {
      s += std::log(buf[l]) + static_cast<double>(le[l]) * kLn2;
    }
    return s;
  }
};

double sum_log_abs_diff_avx2(std::complex<double> z, const std::complex<double>* pts,
                             std::size_t n) {
  const double* p = reinterpret_cast<const double*>(pts);
  const __m256d zv = _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag());
  RealProduct prod;

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d01 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i));
    const __m256d d23 = _mm256_sub_pd(zv, _mm256_loadu_pd(p + 2 * i + 4));
    prod.multiply(norms4(d01, d23));
    if (prod.zero) return -std::numeric_limits<double>::infinity();
  }
  double tail_acc = 1.0;
  std::int64_t tail_e = 0;
  for (; i < n; ++i) {
    const double dr = z.real() - pts[i].real();
    const double di = z.imag() - pts[i].imag();
    tail_acc *= dr * dr + di * di;
    if (tail_acc == 0.0) return -std::numeric_limits<double>::infinity();
    if (tail_acc > kWindowHi || tail_acc < kWindowLo) {
      const int k = std::ilogb(tail_acc);
      tail_acc = std::ldexp(tail_acc, -k);
      tail_e += k;
    }
  }
  return 0.5 * (prod.log_sum() + std::log(tail_acc) +
                static_cast<double>(tail_e) * kLn2);
}

double sum_log_plus_abs_avx2(const std::complex<double>* pts, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(pts);
  const __m256d ones = _mm256_set1_pd(1.0);
  RealProduct prod;

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d01 = _mm256_loadu_pd(p + 2 * i);
    const __m256d d23 = _mm256_loadu_pd(p + 2 * i + 4);
    prod.multiply(_mm256_max_pd(norms4(d01, d23), ones));
  }
  double tail_acc = 1.0;
  std::int64_t tail_e = 0;
  for (; i < n; ++i) {
    const double re = pts[i].real(), im = pts[i].imag();
    tail_acc *= std::fmax(re * re + im * im, 1.0);
    if (tail_acc > kWindowHi) {
      const int k = std::ilogb(tail_acc);
      tail_acc = std::ldexp(tail_acc, -k);
      tail_e += k;
    }
  }
  return 0.5 * (prod.log_sum() + std::log(tail_acc) +
                static_cast<double>(tail_e) * kLn2);
}

}  // namespace

const Funcs* avx2_funcs_or_null() {
  static const Funcs f{prod_diff_avx2, sum_inv_diff_avx2, sum_log_abs_diff_avx2,
                       sum_log_plus_abs_avx2};
  return &f;
}

}  // namespace polysum::kernels
