#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "polysum/polyroots.hpp"
#include "polysum/potential.hpp"
#include "polysum/solver.hpp"

namespace polysum {

// Uniform probability measure on a finite point set.
struct EmpiricalMeasure {
  std::vector<std::complex<double>> points;

  explicit EmpiricalMeasure(std::vector<std::complex<double>> pts);
  std::size_t size() const { return points.size(); }
  double fraction_in_ball(std::complex<double> c, double r) const;
};

// Smooth compactly supported test function
// exp(-1 / (1 - |(z - center)/radius|^2)) inside the ball, 0 outside.
struct BumpFunction {
  std::complex<double> center{0.0, 0.0};
  double radius = 1.0;

  double value(std::complex<double> z) const;
  double laplacian(std::complex<double> z) const;  // exact formula
};

struct Ball {
  std::complex<double> center;
  double radius;
};

// max over balls of |empirical fraction - grid mass| (raw grid masses,
// cells assigned by center)
double ball_discrepancy(const EmpiricalMeasure& emp, const GridMeasure& rho,
                        std::span<const Ball> balls);

struct PotentialDiscrepancy {
  double value = 0.0;      // mean |U_emp - U| over retained probes
  std::size_t used = 0;
  std::size_t discarded = 0;  // probes closer than `exclusion` to a point
};

PotentialDiscrepancy potential_discrepancy(const EmpiricalMeasure& emp,
                                           const LimitSpec& spec,
                                           std::span<const std::complex<double>> probes,
                                           double exclusion);

struct HkyvResult {
  double lhs = 0.0;       // sum of the bump over the roots
  double rhs = 0.0;       // (1/2pi) integral of Laplacian(bump) * log|f|
  double residual = 0.0;  // |lhs - rhs|
};

// Counting-identity check: sum_i bump(z_i) against the grid quadrature of
// (1/2pi) Laplacian(bump)(z) log|f(z)|.  Only cells inside the bump
// support contribute.
HkyvResult hkyv_residual(const PolySum& s, const RootReport& report,
                         const BumpFunction& bump, const Grid& grid);

struct PoissonJensenResult {
  double residual = 0.0;
  bool near_circle_root = false;  // a root within 1e-6 * R of |w| = R
  std::size_t roots_inside = 0;
};

// |log|f(z)| - I(z;R) - sum_{|y|<R} log|R(z-y)/(R^2 - conj(y) z)|| with
// the boundary integral by trapezoidal quadrature of the Poisson kernel.
PoissonJensenResult poisson_jensen_residual(const PolySum& s, const RootReport& report,
                                            std::complex<double> z, double big_r,
                                            std::size_t n_theta);

// (1/degree) * max over contour points of |log|p(x + r e^{i t})| - log M(p)|
double mahler_envelope_gap(const RootPoly& p, std::complex<double> x, double r,
                           std::size_t n_theta);

}  // namespace polysum
