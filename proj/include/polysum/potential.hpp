#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polysum/measures.hpp"
#include "polysum/rng.hpp"

namespace polysum {

// Rectangular evaluation grid; cell area h^2 stands in for the Lebesgue
// element.
struct Grid {
  std::complex<double> center{0.0, 0.0};
  double half_width = 2.0;
  int points_per_side = 400;

  void validate() const;
  double spacing() const {
    return 2.0 * half_width / static_cast<double>(points_per_side - 1);
  }
  std::complex<double> node(int ix, int iy) const {
    const double h = spacing();
    return {center.real() - half_width + h * static_cast<double>(ix),
            center.imag() - half_width + h * static_cast<double>(iy)};
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(points_per_side) *
           static_cast<std::size_t>(points_per_side);
  }
};

// Discrete measure on a grid: the extracted limit measure.  Boundary
// cells carry zero mass; cells touched by clipping or atom fixups are
// flagged.
struct GridMeasure {
  Grid grid;
  std::vector<double> masses;        // row-major, iy * pps + ix
  std::vector<std::uint8_t> flags;   // 1 = boundary, 2 = atom fixup
  double clipped_mass = 0.0;         // total negative mass clipped to zero

  double total() const;
  double mass_in_ball(std::complex<double> c, double r) const;
  double mass_in_annulus(std::complex<double> c, double r_inner, double r_outer) const;
};

struct LimitComponent {
  Measure measure;
  double c;  // limiting degree ratio in [0, 1]
};

// The limit object U(z) = max_k c_k U_k(z), with closed-form potentials
// where the catalog has them and a cached common-random-numbers Monte
// Carlo sample otherwise (one sample set reused across all evaluation
// points, so grid differencing sees spatially correlated noise).
class LimitSpec {
public:
  // all components must have closed-form potentials
  explicit LimitSpec(std::vector<LimitComponent> components);
  // Monte Carlo fallback permitted; mc_samples drawn per non-closed
  // component from sub-streams of rng
  LimitSpec(std::vector<LimitComponent> components, std::size_t mc_samples, Rng& rng);

  const std::vector<LimitComponent>& components() const { return comps_; }
  double component_potential(std::size_t k, std::complex<double> z) const;
  double max_potential(std::complex<double> z) const;
  bool all_closed_form() const;
  std::vector<std::complex<double>> atoms() const;

private:
  void validate() const;
  std::vector<LimitComponent> comps_;
  // parallel to comps_: empty for closed-form components
  std::vector<std::shared_ptr<const std::vector<std::complex<double>>>> samples_;
};

// Riesz measure (1/2pi) Laplacian(U) by a five-point stencil on the grid;
// negative cell masses are clipped to zero and reported in clipped_mass.
GridMeasure riesz_extract(const LimitSpec& spec, const Grid& grid);

// trapezoidal average of U over n_theta equispaced points of |z| = r
double circular_mean(const LimitSpec& spec, double r, std::size_t n_theta);

// (m(U, R) - m(U, 1)) / log R, an approximation of the total Riesz mass
double total_mass_certificate(const LimitSpec& spec, double big_r, std::size_t n_theta);

// (1/n) sum_i log|z - p_i|; -inf when z coincides with a point
double empirical_potential(std::span<const std::complex<double>> points,
                           std::complex<double> z);

}  // namespace polysum
