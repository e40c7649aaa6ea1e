#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "polysum/extnum.hpp"
#include "polysum/rng.hpp"

namespace polysum {

class Measure;

struct UniformDisk {
  std::complex<double> center;
  double radius;
};
struct UniformCircle {
  std::complex<double> center;
  double radius;
};
struct ComplexGaussian {
  std::complex<double> mean;
  double scale;
};
struct PointMass {
  std::complex<double> atom;
};
// Radial law P(|X - center| > r) = 1/log r for r >= e.  No logarithmic
// moment; draws can exceed double range, hence the extended samples.
struct LogParetoRadial {
  std::complex<double> center;
};
// Density 1/(2 pi |w - center|) on the punctured unit disk around center;
// the radius of a draw is uniform on (0, 1).
struct SingularRadial {
  std::complex<double> center;
};
struct Mixture {
  std::vector<std::pair<double, Measure>> parts;
};

// Planar probability measure catalog: sampler for every entry, closed-form
// logarithmic potential where one is known, Monte Carlo otherwise.
class Measure {
public:
  using Variant = std::variant<UniformDisk, UniformCircle, ComplexGaussian, PointMass,
                               LogParetoRadial, SingularRadial, Mixture>;

  static Measure uniform_disk(std::complex<double> center, double radius);
  static Measure uniform_circle(std::complex<double> center, double radius);
  static Measure complex_gaussian(std::complex<double> mean, double scale);
  static Measure point_mass(std::complex<double> atom);
  static Measure log_pareto_radial(std::complex<double> center = {0.0, 0.0});
  static Measure singular_radial(std::complex<double> center = {0.0, 0.0});
  // weights must be >= 0 and sum to 1 within 1e-12
  static Measure mixture(std::vector<std::pair<double, Measure>> parts);

  const Variant& v() const { return v_; }
  const char* kind_name() const;

  bool has_log_moment() const;
  std::vector<std::complex<double>> atoms() const;

  ExtComplex sample_one(Rng& rng) const;
  std::vector<ExtComplex> sample(Rng& rng, std::size_t count) const;
  // Convenience for light-tailed use; throws std::range_error if a draw
  // does not fit in a double (possible only without a log moment).
  std::vector<std::complex<double>> sample_double(Rng& rng, std::size_t count) const;

  // Exact U(z) for uniform-disk, uniform-circle, point-mass and mixtures
  // of these; nullopt otherwise.  -inf at an atom.
  std::optional<double> log_potential_closed(std::complex<double> z) const;

  struct McEstimate {
    double mean;
    double std_error;
    std::size_t n;
  };
  // Sample mean of log|z - W| with its standard error.  Throws
  // std::domain_error for measures without a logarithmic moment.
  McEstimate log_potential_mc(std::complex<double> z, std::size_t n_samples,
                              Rng& rng) const;

private:
  explicit Measure(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace polysum
