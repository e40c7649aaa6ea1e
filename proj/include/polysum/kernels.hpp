#pragma once

#include <complex>
#include <cstddef>

#include "polysum/extnum.hpp"

namespace polysum::kernels {

// Data-parallel inner loops over arrays of complex points.  Each function
// has a scalar reference implementation and, on x86-64, an AVX2 variant
// selected at runtime; the two are equivalence-tested against each other.
//
// Accumulators are kept inside a [2^-500, 2^500] mantissa window with the
// excess tracked in a binary exponent, so products of any length stay
// finite.  Input contract: |re|, |im| of z and of every point must not
// exceed 1e70 (callers route larger values through the extended-exponent
// path in polyroots).  A factor that is exactly zero short-circuits to
// the exact result (zero product / -inf log).
struct Funcs {
  // prod_i (z - pts[i])
  ExtComplex (*prod_diff)(std::complex<double> z, const std::complex<double>* pts,
                          std::size_t n);
  // sum_i 1/(z - pts[i]); non-finite components signal an exact hit
  std::complex<double> (*sum_inv_diff)(std::complex<double> z,
                                       const std::complex<double>* pts, std::size_t n);
  // sum_i log |z - pts[i]|; -inf on an exact hit
  double (*sum_log_abs_diff)(std::complex<double> z, const std::complex<double>* pts,
                             std::size_t n);
  // sum_i log_+ |pts[i]|
  double (*sum_log_plus_abs)(const std::complex<double>* pts, std::size_t n);
};

enum class Backend { scalar, avx2 };

bool cpu_has_avx2();
Backend active_backend();
// Throws std::invalid_argument if the backend is not available on this
// build/CPU.  Intended for tests and for the POLYSUM_KERNELS env override.
void force_backend(Backend b);
const Funcs& funcs_for(Backend b);
const Funcs& active();

const Funcs& scalar_funcs();

}  // namespace polysum::kernels
