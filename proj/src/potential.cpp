#include "polysum/potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "polysum/kernels.hpp"

namespace polysum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

}  // namespace

void Grid::validate() const {
  if (points_per_side < 16) throw std::invalid_argument("points_per_side must be >= 16");
  if (!(half_width > 0.0)) throw std::invalid_argument("half_width must be positive");
}

double GridMeasure::total() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

double GridMeasure::mass_in_ball(std::complex<double> c, double r) const {
  double s = 0.0;
  const int pps = grid.points_per_side;
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      if (std::abs(grid.node(ix, iy) - c) < r) {
        s += masses[static_cast<std::size_t>(iy) * pps + ix];
      }
    }
  }
  return s;
}

double GridMeasure::mass_in_annulus(std::complex<double> c, double r_inner,
                                    double r_outer) const {
  double s = 0.0;
  const int pps = grid.points_per_side;
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      const double d = std::abs(grid.node(ix, iy) - c);
      if (d > r_inner && d < r_outer) {
        s += masses[static_cast<std::size_t>(iy) * pps + ix];
      }
    }
  }
  return s;
}

LimitSpec::LimitSpec(std::vector<LimitComponent> components)
    : comps_(std::move(components)), samples_(comps_.size()) {
  validate();
  for (const auto& comp : comps_) {
    if (comp.c > 0.0 && !comp.measure.log_potential_closed({0.3, 0.7}).has_value()) {
      throw std::invalid_argument(
          "LimitSpec: component lacks a closed-form potential; use the Monte Carlo "
          "constructor");
    }
  }
}

LimitSpec::LimitSpec(std::vector<LimitComponent> components, std::size_t mc_samples,
                     Rng& rng)
    : comps_(std::move(components)), samples_(comps_.size()) {
  validate();
  if (mc_samples == 0) throw std::invalid_argument("mc_samples must be positive");
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    const auto& comp = comps_[k];
    if (comp.c == 0.0) continue;
    if (comp.measure.log_potential_closed({0.3, 0.7}).has_value()) continue;
    if (!comp.measure.has_log_moment()) {
      throw std::domain_error(
          "LimitSpec: Monte Carlo potential undefined without a logarithmic moment");
    }
    Rng sub = rng.split(k);
    samples_[k] = std::make_shared<const std::vector<std::complex<double>>>(
        comp.measure.sample_double(sub, mc_samples));
  }
}

void LimitSpec::validate() const {
  if (comps_.empty()) throw std::invalid_argument("LimitSpec needs at least one component");
  double cmax = 0.0;
  for (const auto& comp : comps_) {
    if (!(comp.c >= 0.0) || comp.c > 1.0) {
      throw std::invalid_argument("component ratio c must be in [0, 1]");
    }
    cmax = std::fmax(cmax, comp.c);
  }
  if (std::fabs(cmax - 1.0) > 1e-12) {
    throw std::invalid_argument("some component must have ratio c = 1");
  }
}

bool LimitSpec::all_closed_form() const {
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    if (comps_[k].c > 0.0 && samples_[k]) return false;
  }
  return true;
}

std::vector<std::complex<double>> LimitSpec::atoms() const {
  std::vector<std::complex<double>> out;
  for (const auto& comp : comps_) {
    if (comp.c == 0.0) continue;
    auto a = comp.measure.atoms();
    out.insert(out.end(), a.begin(), a.end());
  }
  return out;
}

double LimitSpec::component_potential(std::size_t k, std::complex<double> z) const {
  const auto& comp = comps_[k];
  if (comp.c == 0.0) return 0.0;  // the stated convention for c_k = 0
  if (samples_[k]) {
    return comp.c * empirical_potential(*samples_[k], z);
  }
  const auto u = comp.measure.log_potential_closed(z);
  if (!u) throw std::logic_error("component potential unavailable");
  return comp.c * *u;
}

double LimitSpec::max_potential(std::complex<double> z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < comps_.size(); ++k) {
    best = std::fmax(best, component_potential(k, z));
  }
  return best;
}

GridMeasure riesz_extract(const LimitSpec& spec, const Grid& grid) {
  grid.validate();
  const int pps = grid.points_per_side;
  const double h = grid.spacing();

  // Atom fixup: a node that coincides with a point-mass atom would carry
  // U = -inf; replace it by the value log(h) - pi/2, which keeps the
  // stencil's telescoping total intact to leading order, and flag the
  // cell.
  const auto atoms = spec.atoms();

  std::vector<double> u(grid.cell_count());
  std::vector<std::uint8_t> flags(grid.cell_count(), 0);
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * pps + ix;
      const std::complex<double> z = grid.node(ix, iy);
      bool fixed = false;
      for (const auto& a : atoms) {
        if (std::abs(z - a) < 1e-12 * (1.0 + std::abs(a))) {
          u[idx] = std::log(h) - Rng::pi() / 2.0;
          flags[idx] = 2;
          fixed = true;
          break;
        }
      }
      if (!fixed) u[idx] = spec.max_potential(z);
    }
  }

  GridMeasure out;
  out.grid = grid;
  out.masses.assign(grid.cell_count(), 0.0);
  out.flags = std::move(flags);
  for (int iy = 0; iy < pps; ++iy) {
    for (int ix = 0; ix < pps; ++ix) {
      const std::size_t idx = static_cast<std::size_t>(iy) * pps + ix;
      if (ix == 0 || iy == 0 || ix == pps - 1 || iy == pps - 1) {
        out.flags[idx] |= 1;  // boundary carries zero mass
        continue;
      }
      const double lap = u[idx - 1] + u[idx + 1] + u[idx - pps] + u[idx + pps] -
                         4.0 * u[idx];
      const double mass = lap / kTwoPi;  // (1/2pi) * Laplacian * h^2
      if (mass < 0.0) {
        out.clipped_mass += -mass;
      } else {
        out.masses[idx] = mass;
      }
    }
  }
  return out;
}

double circular_mean(const LimitSpec& spec, double r, std::size_t n_theta) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (n_theta < 8) throw std::invalid_argument("n_theta too small");
  double s = 0.0;
  for (std::size_t j = 0; j < n_theta; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n_theta);
    s += spec.max_potential({r * std::cos(t), r * std::sin(t)});
  }
  return s / static_cast<double>(n_theta);
}

double total_mass_certificate(const LimitSpec& spec, double big_r,
                              std::size_t n_theta) {
  if (!(big_r > 1.0)) throw std::invalid_argument("R must exceed 1");
  return (circular_mean(spec, big_r, n_theta) - circular_mean(spec, 1.0, n_theta)) /
         std::log(big_r);
}

double empirical_potential(std::span<const std::complex<double>> points,
                           std::complex<double> z) {
  if (points.empty()) throw std::invalid_argument("empirical_potential: no points");
  const double s = kernels::active().sum_log_abs_diff(z, points.data(), points.size());
  return s / static_cast<double>(points.size());
}

}  // namespace polysum
