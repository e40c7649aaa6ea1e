#include "polysum/polyroots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polysum/kernels.hpp"

namespace polysum {

namespace {

bool fits_bulk(const ExtComplex& x) {
  if (x.is_zero()) return true;
  // normalized mantissa in [0.5, 1): |value| < 2^exp2
  return x.exp2 <= 50;  // 2^50 ~ 1.1e15
}

}  // namespace

RootPoly::RootPoly(std::vector<ExtComplex> roots, long leading)
    : roots_(std::move(roots)), leading_(leading) {
  if (leading_ < 1) throw std::invalid_argument("leading coefficient must be >= 1");
  build_partition();
}

RootPoly::RootPoly(const std::vector<std::complex<double>>& roots, long leading)
    : leading_(leading) {
  if (leading_ < 1) throw std::invalid_argument("leading coefficient must be >= 1");
  roots_.reserve(roots.size());
  for (const auto& r : roots) roots_.push_back(ExtComplex::from(r));
  build_partition();
}

void RootPoly::build_partition() {
  bulk_.clear();
  extreme_.clear();
  for (const auto& x : roots_) {
    if (fits_bulk(x)) {
      bulk_.push_back(x.to_complex());
    } else {
      extreme_.push_back(x);
    }
  }
}

ExtComplex RootPoly::eval_ext(std::complex<double> z) const {
  ExtComplex acc = kernels::active().prod_diff(z, bulk_.data(), bulk_.size());
  if (acc.is_zero()) return acc;
  const ExtComplex ze = ExtComplex::from(z);
  for (const auto& x : extreme_) {
    acc = ext_mul(acc, ext_sub(ze, x));
  }
  if (leading_ != 1) acc = ext_mul(acc, ExtComplex::from(static_cast<double>(leading_)));
  return acc;
}

ExtComplex RootPoly::log_deriv_ext(std::complex<double> z) const {
  const std::complex<double> bulk_sum =
      kernels::active().sum_inv_diff(z, bulk_.data(), bulk_.size());
  ExtComplex acc = ExtComplex::from(bulk_sum);
  const ExtComplex ze = ExtComplex::from(z);
  const ExtComplex one = ExtComplex::one();
  for (const auto& x : extreme_) {
    acc = ext_add(acc, ext_div(one, ext_sub(ze, x)));
  }
  return acc;
}

std::complex<double> RootPoly::log_deriv_sum(std::complex<double> z) const {
  const std::complex<double> s = log_deriv_ext(z).to_complex();
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw std::domain_error("log_deriv_sum: z coincides with a root (pole)");
  }
  return s;
}

ExtComplex RootPoly::deriv_ext(std::complex<double> z) const {
  const ExtComplex value = eval_ext(z);
  if (!value.is_zero()) {
    const ExtComplex d = log_deriv_ext(z);
    const std::complex<double> dm = d.man;
    if (std::isfinite(dm.real()) && std::isfinite(dm.imag())) {
      return ext_mul(value, d);
    }
  }
  // z sits exactly on a root: only the cofactor of one hit survives; two
  // or more hits make the derivative vanish as well.
  std::size_t hit = roots_.size();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (roots_[i].to_complex() == z) {
      hit = i;
      if (++hits > 1) return ExtComplex::zero();
    }
  }
  if (hit == roots_.size()) {
    // no exact hit after all (non-finite inverse sum from an overflow);
    // fall back to the product form with the value it has
    return ext_mul(value, log_deriv_ext(z));
  }
  std::vector<ExtComplex> rest;
  rest.reserve(roots_.size() - 1);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (i != hit) rest.push_back(roots_[i]);
  }
  return RootPoly(std::move(rest), leading_).eval_ext(z);
}

double RootPoly::log_mahler() const {
  double acc = kernels::active().sum_log_plus_abs(bulk_.data(), bulk_.size());
  for (const auto& x : extreme_) {
    acc += std::fmax(0.0, ext_log_abs(x));
  }
  return acc;
}

RootPoly RootPoly::shifted(std::complex<double> a) const {
  std::vector<ExtComplex> moved;
  moved.reserve(roots_.size());
  const ExtComplex ae = ExtComplex::from(a);
  for (const auto& x : roots_) moved.push_back(ext_add(x, ae));
  return RootPoly(std::move(moved), leading_);
}

double s_statistic(const RootPoly& p, const RootPoly& q) {
  if (p.degree() != q.degree() || p.degree() == 0) {
    throw std::invalid_argument("s_statistic requires equal positive degrees");
  }
  return (p.log_mahler() - q.log_mahler()) / static_cast<double>(p.degree());
}

PolySum::PolySum(std::vector<RootPoly> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("PolySum needs at least one term");
  for (const auto& t : terms_) degree_ = std::max(degree_, t.degree());
  for (const auto& t : terms_) {
    if (t.degree() == degree_) leading_ += t.leading();
  }
}

ExtComplex PolySum::eval(std::complex<double> z) const {
  ExtComplex acc = ExtComplex::zero();
  for (const auto& t : terms_) acc = ext_add(acc, t.eval_ext(z));
  return acc;
}

ExtComplex PolySum::deriv(std::complex<double> z) const {
  ExtComplex acc = ExtComplex::zero();
  for (const auto& t : terms_) acc = ext_add(acc, t.deriv_ext(z));
  return acc;
}

double PolySum::term_scale_log(std::complex<double> z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) best = std::fmax(best, ext_log_abs(t.eval_ext(z)));
  return best;
}

DegreeSequence DegreeSequence::ratio(double a) {
  if (!(a > 0.0) || a > 1.0) throw std::invalid_argument("ratio alpha must be in (0, 1]");
  return {Form::ratio, a, 1};
}

DegreeSequence DegreeSequence::constant(long d) {
  if (d < 1) throw std::invalid_argument("constant degree must be >= 1");
  return {Form::constant, 0.0, d};
}

std::size_t DegreeSequence::degree_at(std::size_t n) const {
  switch (form) {
    case Form::full:
      return n;
    case Form::ratio:
      return static_cast<std::size_t>(
          std::ceil(alpha * static_cast<double>(n) - 1e-9));
    case Form::sqrt_of_n:
      return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    case Form::constant:
      return static_cast<std::size_t>(fixed);
  }
  return n;
}

double DegreeSequence::limit_ratio() const {
  switch (form) {
    case Form::full:
      return 1.0;
    case Form::ratio:
      return alpha;
    case Form::sqrt_of_n:
    case Form::constant:
      return 0.0;
  }
  return 1.0;
}

const char* DegreeSequence::form_name() const {
  switch (form) {
    case Form::full:
      return "full";
    case Form::ratio:
      return "ratio";
    case Form::sqrt_of_n:
      return "sqrt";
    case Form::constant:
      return "constant";
  }
  return "full";
}

}  // namespace polysum
