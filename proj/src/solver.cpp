#include "polysum/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polysum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

bool finite(std::complex<double> z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

std::complex<double> jitter(Rng& rng, double magnitude) {
  const double r = magnitude * rng.uniform01();
  const double t = rng.angle();
  return {r * std::cos(t), r * std::sin(t)};
}

// Union of term roots, jittered, truncated/padded to the sum degree.
std::vector<std::complex<double>> initial_guesses(const PolySum& s, Rng& rng) {
  const std::size_t n = s.degree();
  std::vector<std::complex<double>> g;
  g.reserve(n);
  double rmax = 0.0;
  for (const auto& term : s.terms()) {
    for (const auto& x : term.bulk_roots()) {
      rmax = std::fmax(rmax, std::abs(x));
      if (g.size() < n) {
        g.push_back(x + jitter(rng, 1e-3 * (1.0 + std::abs(x))));
      }
    }
  }
  const double ring = 1.0 + rmax;
  std::size_t k = 0;
  while (g.size() < n) {
    const double t = kTwoPi * static_cast<double>(k++) / static_cast<double>(n);
    const std::complex<double> p{ring * std::cos(t), ring * std::sin(t)};
    g.push_back(p + jitter(rng, 1e-3 * (1.0 + ring)));
  }
  return g;
}

struct SweepResult {
  double max_step = 0.0;
  bool ok = true;
};

// One Jacobi-style Aberth sweep: every update uses the previous iterate
// vector, so the result is independent of evaluation order.
SweepResult aberth_sweep(const PolySum& s, const std::vector<std::complex<double>>& z,
                         std::vector<std::complex<double>>& next, Rng& rng) {
  const std::size_t n = z.size();
  SweepResult res;
  for (std::size_t i = 0; i < n; ++i) {
    const ExtComplex f = s.eval(z[i]);
    if (f.is_zero()) {
      next[i] = z[i];
      continue;
    }
    const ExtComplex fp = s.deriv(z[i]);
    const std::complex<double> newton = ext_ratio(f, fp);
    std::complex<double> repel{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) repel += 1.0 / (z[i] - z[j]);
    }
    const std::complex<double> denom = 1.0 - newton * repel;
    std::complex<double> w = newton / denom;
    if (!finite(w)) {
      // collided iterates or a pole: nudge this point and keep going
      next[i] = z[i] + jitter(rng, 1e-3 * (1.0 + std::abs(z[i])));
      res.ok = false;
      continue;
    }
    next[i] = z[i] - w;
    res.max_step = std::fmax(res.max_step, std::abs(w) / (1.0 + std::abs(z[i])));
  }
  return res;
}

std::vector<double> residuals_on_term_scale(const PolySum& s,
                                            const std::vector<std::complex<double>>& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = ext_log_abs(s.eval(z[i])) - s.term_scale_log(z[i]);
  }
  return out;
}

}  // namespace

void SolveOptions::validate() const {
  if (!(stop_tolerance > 0.0) || stop_tolerance > 1e-3) {
    throw std::invalid_argument("stop_tolerance must be in (0, 1e-3]");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (restart_attempts < 0) throw std::invalid_argument("restart_attempts must be >= 0");
}

std::string RootReport::diagnostics_json() const {
  std::ostringstream os;
  os << "{\"iterations\":" << iterations << ",\"converged\":"
     << (converged ? "true" : "false") << ",\"restarts\":" << restarts;
  if (!failure_reason.empty()) os << ",\"failure_reason\":\"" << failure_reason << "\"";
  os << "}";
  return os.str();
}

RootReport find_roots(const PolySum& s, const SolveOptions& opts, Rng& rng) {
  opts.validate();
  if (s.degree() < 1) throw std::invalid_argument("find_roots: sum degree must be >= 1");

  RootReport report;
  const double log_bound = std::log(kResidualBound);

  for (int attempt = 0; attempt <= opts.restart_attempts; ++attempt) {
    std::vector<std::complex<double>> z = initial_guesses(s, rng);
    std::vector<std::complex<double>> next(z.size());
    bool stepped_below_tol = false;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      const SweepResult sw = aberth_sweep(s, z, next, rng);
      z.swap(next);
      if (sw.ok && sw.max_step < opts.stop_tolerance) {
        stepped_below_tol = true;
        ++it;
        break;
      }
    }
    report.iterations += it;
    report.restarts = attempt;
    report.roots = z;
    report.log_residuals = residuals_on_term_scale(s, z);
    const bool residuals_ok =
        std::all_of(report.log_residuals.begin(), report.log_residuals.end(),
                    [&](double r) { return r <= log_bound; });
    if (stepped_below_tol && residuals_ok) {
      report.converged = true;
      report.failure_reason.clear();
      return report;
    }
    report.converged = false;
    report.failure_reason = stepped_below_tol
                                ? "residuals above the term-scale acceptance bound"
                                : "iteration did not reach the step tolerance";
  }
  return report;
}

CountResult count_roots_argument(const PolySum& s, std::complex<double> center,
                                 double radius, std::size_t quadrature_points) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (quadrature_points < 8) throw std::invalid_argument("quadrature_points too small");

  CountResult res;
  res.min_log_abs = std::numeric_limits<double>::infinity();
  res.max_log_abs = -std::numeric_limits<double>::infinity();
  // (1/2pi) * mean over theta of Re[(f'/f)(z) * (z - c)] with imaginary
  // part kept as part of the certificate
  std::complex<double> integral{0.0, 0.0};
  for (std::size_t j = 0; j < quadrature_points; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(quadrature_points);
    const std::complex<double> offset{radius * std::cos(t), radius * std::sin(t)};
    const std::complex<double> z = center + offset;
    const ExtComplex f = s.eval(z);
    const double la = ext_log_abs(f);
    res.min_log_abs = std::fmin(res.min_log_abs, la);
    res.max_log_abs = std::fmax(res.max_log_abs, la);
    const std::complex<double> g = ext_ratio(s.deriv(z), f);
    integral += g * offset;
  }
  integral /= static_cast<double>(quadrature_points);
  const double raw = integral.real();
  res.count = std::lround(raw);
  res.dist_to_integer = std::hypot(raw - static_cast<double>(res.count), integral.imag());
  const bool vanishes = !std::isfinite(res.min_log_abs) ||
                        res.min_log_abs < res.max_log_abs - 40.0;
  res.reliable = res.dist_to_integer <= 0.1 && !vanishes && res.count >= 0;
  return res;
}

bool rouche_dominance(const RootPoly& p, const RootPoly& q, std::complex<double> center,
                      double radius, std::size_t n_theta) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n_theta);
    const std::complex<double> z =
        center + std::complex<double>(radius * std::cos(t), radius * std::sin(t));
    if (!ext_abs_greater(p.eval_ext(z), q.eval_ext(z))) return false;
  }
  return true;
}

}  // namespace polysum
