#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "polysum/polyroots.hpp"
#include "polysum/rng.hpp"

namespace polysum {

struct SolveOptions {
  int max_iterations = 500;
  // Aberth step size relative to 1 + |z|
  double stop_tolerance = 1e-12;
  int restart_attempts = 3;

  void validate() const;
};

// Backward-error acceptance for converged roots: |f(z*)| must not exceed
// kResidualBound times the magnitude of the largest term at z*.
inline constexpr double kResidualBound = 1e-8;

struct RootReport {
  std::vector<std::complex<double>> roots;
  // log|f(z_i)| - log max_k |p_k(z_i)|, the residual on the term scale
  std::vector<double> log_residuals;
  bool converged = false;
  int iterations = 0;
  int restarts = 0;
  std::string failure_reason;

  std::string diagnostics_json() const;
};

// Simultaneous Aberth-Ehrlich iteration on the factored representation.
// Initial guesses are the union of term roots with multiplicative jitter;
// non-convergent attempts restart with fresh jitter.  Failure is reported
// through converged=false, never thrown.
RootReport find_roots(const PolySum& s, const SolveOptions& opts, Rng& rng);

struct CountResult {
  long count = 0;
  double dist_to_integer = 0.0;  // the error certificate
  bool reliable = false;
  double min_log_abs = 0.0;  // of f on the contour
  double max_log_abs = 0.0;
};

// Winding number of f around the circle, by trapezoidal quadrature of the
// factored logarithmic derivative.  Unreliable when the rounded count is
// more than 0.1 away from the raw integral or when |f| nearly vanishes on
// the contour (a root too close to the circle).
CountResult count_roots_argument(const PolySum& s, std::complex<double> center,
                                 double radius, std::size_t quadrature_points);

// log|p| > log|q| at every one of n_theta equispaced contour points
bool rouche_dominance(const RootPoly& p, const RootPoly& q, std::complex<double> center,
                      double radius, std::size_t n_theta);

}  // namespace polysum
