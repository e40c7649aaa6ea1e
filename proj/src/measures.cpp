#include "polysum/measures.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace polysum {

namespace {

double validate_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
  return x;
}

}  // namespace

Measure Measure::uniform_disk(std::complex<double> center, double radius) {
  validate_positive(radius, "radius");
  return Measure(Variant{UniformDisk{center, radius}});
}

Measure Measure::uniform_circle(std::complex<double> center, double radius) {
  validate_positive(radius, "radius");
  return Measure(Variant{UniformCircle{center, radius}});
}

Measure Measure::complex_gaussian(std::complex<double> mean, double scale) {
  validate_positive(scale, "scale");
  return Measure(Variant{ComplexGaussian{mean, scale}});
}

Measure Measure::point_mass(std::complex<double> atom) {
  return Measure(Variant{PointMass{atom}});
}

Measure Measure::log_pareto_radial(std::complex<double> center) {
  return Measure(Variant{LogParetoRadial{center}});
}

Measure Measure::singular_radial(std::complex<double> center) {
  return Measure(Variant{SingularRadial{center}});
}

Measure Measure::mixture(std::vector<std::pair<double, Measure>> parts) {
  if (parts.empty()) throw std::invalid_argument("mixture needs at least one part");
  double total = 0.0;
  for (const auto& [w, m] : parts) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weight must be nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to 1 within 1e-12");
  }
  return Measure(Variant{Mixture{std::move(parts)}});
}

const char* Measure::kind_name() const {
  struct V {
    const char* operator()(const UniformDisk&) const { return "uniform-disk"; }
    const char* operator()(const UniformCircle&) const { return "uniform-circle"; }
    const char* operator()(const ComplexGaussian&) const { return "complex-gaussian"; }
    const char* operator()(const PointMass&) const { return "point-mass"; }
    const char* operator()(const LogParetoRadial&) const { return "log-pareto-radial"; }
    const char* operator()(const SingularRadial&) const { return "singular-radial"; }
    const char* operator()(const Mixture&) const { return "mixture"; }
  };
  return std::visit(V{}, v_);
}

bool Measure::has_log_moment() const {
  struct V {
    bool operator()(const LogParetoRadial&) const { return false; }
    bool operator()(const Mixture& m) const {
      for (const auto& [w, part] : m.parts) {
        if (w > 0.0 && !part.has_log_moment()) return false;
      }
      return true;
    }
    template <class T>
    bool operator()(const T&) const {
      return true;
    }
  };
  return std::visit(V{}, v_);
}

std::vector<std::complex<double>> Measure::atoms() const {
  std::vector<std::complex<double>> out;
  struct V {
    std::vector<std::complex<double>>& out;
    void operator()(const PointMass& p) const { out.push_back(p.atom); }
    void operator()(const Mixture& m) const {
      for (const auto& [w, part] : m.parts) {
        if (w > 0.0) {
          auto a = part.atoms();
          out.insert(out.end(), a.begin(), a.end());
        }
      }
    }
    template <class T>
    void operator()(const T&) const {}
  };
  std::visit(V{out}, v_);
  return out;
}

ExtComplex Measure::sample_one(Rng& rng) const {
  struct V {
    Rng& rng;
    ExtComplex operator()(const UniformDisk& d) const {
      return ExtComplex::from(d.center + d.radius * rng.in_unit_disk());
    }
    ExtComplex operator()(const UniformCircle& c) const {
      const double t = rng.angle();
      return ExtComplex::from(c.center +
                              c.radius * std::complex<double>(std::cos(t), std::sin(t)));
    }
    ExtComplex operator()(const ComplexGaussian& g) const {
      return ExtComplex::from(g.mean + g.scale * rng.gaussian());
    }
    ExtComplex operator()(const PointMass& p) const { return ExtComplex::from(p.atom); }
    ExtComplex operator()(const LogParetoRadial& lp) const {
      // |X - center| = exp(1/u), u uniform on (0,1): exact inverse
      // transform of P(|X| > r) = 1/log r for r >= e.
      const double log_mag = 1.0 / rng.open01();
      const double t = rng.angle();
      ExtComplex x = ExtComplex::from_polar_log(log_mag, t);
      if (lp.center != std::complex<double>(0.0, 0.0)) {
        x = ext_add(x, ExtComplex::from(lp.center));
      }
      return x;
    }
    ExtComplex operator()(const SingularRadial& s) const {
      const double r = rng.uniform01();
      const double t = rng.angle();
      return ExtComplex::from(s.center +
                              std::complex<double>(r * std::cos(t), r * std::sin(t)));
    }
    ExtComplex operator()(const Mixture& m) const {
      double u = rng.uniform01();
      for (const auto& [w, part] : m.parts) {
        if (u < w) return part.sample_one(rng);
        u -= w;
      }
      return m.parts.back().second.sample_one(rng);
    }
  };
  return std::visit(V{rng}, v_);
}

std::vector<ExtComplex> Measure::sample(Rng& rng, std::size_t count) const {
  std::vector<ExtComplex> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(rng));
  return out;
}

std::vector<std::complex<double>> Measure::sample_double(Rng& rng,
                                                         std::size_t count) const {
  std::vector<std::complex<double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ExtComplex x = sample_one(rng);
    if (x.exp2 > 1023) throw std::range_error("sample exceeds double range");
    out.push_back(x.to_complex());
  }
  return out;
}

std::optional<double> Measure::log_potential_closed(std::complex<double> z) const {
  struct V {
    std::complex<double> z;
    std::optional<double> operator()(const UniformDisk& m) const {
      const double d = std::abs(z - m.center);
      if (d >= m.radius) return std::log(d);
      const double t = d / m.radius;
      return std::log(m.radius) + 0.5 * (t * t - 1.0);
    }
    std::optional<double> operator()(const UniformCircle& m) const {
      return std::log(std::fmax(std::abs(z - m.center), m.radius));
    }
    std::optional<double> operator()(const PointMass& m) const {
      const double d = std::abs(z - m.atom);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      return std::log(d);
    }
    std::optional<double> operator()(const Mixture& m) const {
      double acc = 0.0;
      for (const auto& [w, part] : m.parts) {
        const auto u = part.log_potential_closed(z);
        if (!u) return std::nullopt;
        if (w > 0.0) acc += w * *u;
      }
      return acc;
    }
    template <class T>
    std::optional<double> operator()(const T&) const {
      return std::nullopt;
    }
  };
  return std::visit(V{z}, v_);
}

Measure::McEstimate Measure::log_potential_mc(std::complex<double> z,
                                              std::size_t n_samples, Rng& rng) const {
  if (!has_log_moment()) {
    throw std::domain_error(
        "log_potential_mc: measure has no logarithmic moment, estimator diverges");
  }
  if (n_samples == 0) throw std::invalid_argument("n_samples must be positive");
  // Welford accumulation of log|z - W|
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const ExtComplex w = sample_one(rng);
    const double v = ext_log_abs(ext_sub(ExtComplex::from(z), w));
    const double d1 = v - mean;
    mean += d1 / static_cast<double>(i + 1);
    m2 += d1 * (v - mean);
  }
  const double variance = n_samples > 1 ? m2 / static_cast<double>(n_samples - 1) : 0.0;
  return {mean, std::sqrt(variance / static_cast<double>(n_samples)), n_samples};
}

}  // namespace polysum
