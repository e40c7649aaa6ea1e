#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "polysum/extnum.hpp"

namespace polysum {

// Monic polynomial held as its root multiset (times an integer leading
// coefficient for sums of equal-degree terms).  Never expanded into
// coefficients: evaluation is a factored product in extended-exponent
// arithmetic, so heavy-tailed roots with magnitudes far beyond double
// range are handled exactly where it matters (their log-magnitudes).
//
// Internally the roots are split into a "bulk" slice that fits in
// ordinary doubles (fed to the SIMD kernels) and the rare "extreme" rest,
// folded in through scalar extended arithmetic.
class RootPoly {
public:
  RootPoly() = default;
  explicit RootPoly(std::vector<ExtComplex> roots, long leading = 1);
  explicit RootPoly(const std::vector<std::complex<double>>& roots, long leading = 1);

  std::size_t degree() const { return roots_.size(); }
  long leading() const { return leading_; }
  const std::vector<ExtComplex>& roots() const { return roots_; }
  const std::vector<std::complex<double>>& bulk_roots() const { return bulk_; }
  const std::vector<ExtComplex>& extreme_roots() const { return extreme_; }
  bool all_bulk() const { return extreme_.empty(); }

  // leading * prod_i (z - x_i); exactly zero when z hits a root
  ExtComplex eval_ext(std::complex<double> z) const;
  // sum_i 1/(z - x_i) in extended form (zero result for degree 0)
  ExtComplex log_deriv_ext(std::complex<double> z) const;
  // same as an ordinary complex number; throws std::domain_error on a pole
  std::complex<double> log_deriv_sum(std::complex<double> z) const;
  // p'(z) = p(z) * sum_i 1/(z - x_i), with exact-hit cofactor handling
  ExtComplex deriv_ext(std::complex<double> z) const;

  // log M = sum_i log_+ |x_i| (leading coefficient excluded)
  double log_mahler() const;

  RootPoly shifted(std::complex<double> a) const;

  // bulk slice bound: components at most this magnitude go to the kernels
  static constexpr double kBulkLimit = 1e15;

private:
  void build_partition();

  std::vector<ExtComplex> roots_;
  std::vector<std::complex<double>> bulk_;
  std::vector<ExtComplex> extreme_;
  long leading_ = 1;
};

// (log M(p) - log M(q)) / n for equal degrees n; throws on mismatch
double s_statistic(const RootPoly& p, const RootPoly& q);

// Sum of factored polynomials.  Degree is the max term degree; the
// leading coefficient is the number of terms attaining it.
class PolySum {
public:
  explicit PolySum(std::vector<RootPoly> terms);

  const std::vector<RootPoly>& terms() const { return terms_; }
  std::size_t degree() const { return degree_; }
  long leading() const { return leading_; }

  ExtComplex eval(std::complex<double> z) const;
  ExtComplex deriv(std::complex<double> z) const;
  // log-magnitude of the largest single term at z (the local scale used
  // for backward-error acceptance)
  double term_scale_log(std::complex<double> z) const;

private:
  std::vector<RootPoly> terms_;
  std::size_t degree_ = 0;
  long leading_ = 0;
};

// Degree sequence forms n_k(n) with their limits c_k = lim n_k / n.
struct DegreeSequence {
  enum class Form { full, ratio, sqrt_of_n, constant };

  Form form = Form::full;
  double alpha = 1.0;  // ratio form, in (0, 1]
  long fixed = 1;      // constant form

  static DegreeSequence full() { return {Form::full, 1.0, 1}; }
  static DegreeSequence ratio(double a);
  static DegreeSequence sqrt_of_n() { return {Form::sqrt_of_n, 0.0, 1}; }
  static DegreeSequence constant(long d);

  std::size_t degree_at(std::size_t n) const;
  double limit_ratio() const;
  const char* form_name() const;
};

}  // namespace polysum
