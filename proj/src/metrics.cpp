#include "polysum/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polysum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

double poisson_kernel(double big_r, double t, double theta) {
  const double num = big_r * big_r - t * t;
  const double den = big_r * big_r + t * t - 2.0 * big_r * t * std::cos(theta);
  return num / den;
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<std::complex<double>> pts)
    : points(std::move(pts)) {
  if (points.empty()) throw std::invalid_argument("EmpiricalMeasure needs n >= 1 points");
}

double EmpiricalMeasure::fraction_in_ball(std::complex<double> c, double r) const {
  std::size_t inside = 0;
  for (const auto& p : points) {
    if (std::abs(p - c) < r) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(points.size());
}

double BumpFunction::value(std::complex<double> z) const {
  const double t2 = std::norm((z - center) / radius);
  if (t2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t2));
}

double BumpFunction::laplacian(std::complex<double> z) const {
  // With g(t) = exp(-1/(1-t)) and t = |(z-c)/R|^2:
  //   Laplacian = (4/R^2) * (g'(t) + t g''(t)),
  //   g'  = -g/(1-t)^2,  g'' = g/(1-t)^4 - 2g/(1-t)^3.
  const double t = std::norm((z - center) / radius);
  if (t >= 1.0) return 0.0;
  const double om = 1.0 - t;
  const double g = std::exp(-1.0 / om);
  const double gp = -g / (om * om);
  const double gpp = g / (om * om * om * om) - 2.0 * g / (om * om * om);
  return 4.0 / (radius * radius) * (gp + t * gpp);
}

double ball_discrepancy(const EmpiricalMeasure& emp, const GridMeasure& rho,
                        std::span<const Ball> balls) {
  double worst = 0.0;
  for (const auto& b : balls) {
    const double f = emp.fraction_in_ball(b.center, b.radius);
    const double m = rho.mass_in_ball(b.center, b.radius);
    worst = std::fmax(worst, std::fabs(f - m));
  }
  return worst;
}

PotentialDiscrepancy potential_discrepancy(const EmpiricalMeasure& emp,
                                           const LimitSpec& spec,
                                           std::span<const std::complex<double>> probes,
                                           double exclusion) {
  if (!(exclusion > 0.0)) throw std::invalid_argument("exclusion must be positive");
  PotentialDiscrepancy out;
  double acc = 0.0;
  for (const auto& z : probes) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& p : emp.points) dmin = std::fmin(dmin, std::abs(z - p));
    if (dmin <= exclusion) {
      ++out.discarded;
      continue;
    }
    acc += std::fabs(empirical_potential(emp.points, z) - spec.max_potential(z));
    ++out.used;
  }
  out.value = out.used > 0 ? acc / static_cast<double>(out.used) : 0.0;
  return out;
}

HkyvResult hkyv_residual(const PolySum& s, const RootReport& report,
                         const BumpFunction& bump, const Grid& grid) {
  grid.validate();
  HkyvResult res;
  for (const auto& z : report.roots) res.lhs += bump.value(z);

  const int pps = grid.points_per_side;
  const double h = grid.spacing();
  double quad = 0.0;
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      const std::complex<double> z = grid.node(ix, iy);
      if (std::norm(z - bump.center) >= bump.radius * bump.radius) continue;
      const double lap = bump.laplacian(z);
      quad += lap * ext_log_abs(s.eval(z));
    }
  }
  res.rhs = quad * h * h / kTwoPi;
  res.residual = std::fabs(res.lhs - res.rhs);
  return res;
}

PoissonJensenResult poisson_jensen_residual(const PolySum& s, const RootReport& report,
                                            std::complex<double> z, double big_r,
                                            std::size_t n_theta) {
  if (!(big_r > 0.0) || std::abs(z) >= big_r) {
    throw std::invalid_argument("require |z| < R");
  }
  if (n_theta < 16) throw std::invalid_argument("n_theta too small");

  PoissonJensenResult res;
  const double t = std::abs(z);
  const double argz = std::arg(z);

  double integral = 0.0;
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n_theta);
    const std::complex<double> w{big_r * std::cos(theta), big_r * std::sin(theta)};
    integral += ext_log_abs(s.eval(w)) * poisson_kernel(big_r, t, theta - argz);
  }
  integral /= static_cast<double>(n_theta);

  double correction = 0.0;
  for (const auto& y : report.roots) {
    const double ay = std::abs(y);
    if (std::fabs(ay - big_r) < 1e-6 * big_r) res.near_circle_root = true;
    if (ay < big_r) {
      ++res.roots_inside;
      correction += std::log(std::abs(big_r * (z - y) / (big_r * big_r - std::conj(y) * z)));
    }
  }

  const double lhs = ext_log_abs(s.eval(z));
  res.residual = std::fabs(lhs - integral - correction);
  return res;
}

double mahler_envelope_gap(const RootPoly& p, std::complex<double> x, double r,
                           std::size_t n_theta) {
  if (p.degree() == 0) throw std::invalid_argument("degree must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
  const double log_m = p.log_mahler();
  double worst = 0.0;
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n_theta);
    const std::complex<double> z =
        x + std::complex<double>(r * std::cos(t), r * std::sin(t));
    worst = std::fmax(worst, std::fabs(ext_log_abs(p.eval_ext(z)) - log_m));
  }
  return worst / static_cast<double>(p.degree());
}

}  // namespace polysum
