#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/entropy.hpp"
#include "behent/error.hpp"
#include "behent/rng.hpp"
#include "behent/util.hpp"
#include "behent/weighting.hpp"

namespace behent {

enum class DistributionKind { UniformBox, Gaussian, GaussianMixture, TruncatedGaussian };

struct MixtureComponent {
  double weight = 0.0;
  std::vector<double> mean;
  double sigma = 1.0;
};

// A seeded sampling recipe with (where they exist) closed-form entropies,
// used as ground truth in convergence studies and tests.
struct DistributionSpec {
  DistributionKind kind = DistributionKind::UniformBox;
  int dim = 1;
  std::uint64_t seed = 0;
  std::vector<double> lo, hi;            // UniformBox / TruncatedGaussian box
  std::vector<double> mean;              // Gaussian / TruncatedGaussian center
  double sigma = 1.0;                    // isotropic scale
  std::vector<MixtureComponent> components;

  static DistributionSpec uniform_box(std::vector<double> lo, std::vector<double> hi, std::uint64_t seed) {
    DistributionSpec s;
    s.kind = DistributionKind::UniformBox;
    s.dim = static_cast<int>(lo.size());
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    s.seed = seed;
    s.validate();
    return s;
  }

  static DistributionSpec gaussian(std::vector<double> mean, double sigma, std::uint64_t seed) {
    DistributionSpec s;
    s.kind = DistributionKind::Gaussian;
    s.dim = static_cast<int>(mean.size());
    s.mean = std::move(mean);
    s.sigma = sigma;
    s.seed = seed;
    s.validate();
    return s;
  }

  static DistributionSpec gaussian_mixture(int dim, std::vector<MixtureComponent> components, std::uint64_t seed) {
    DistributionSpec s;
    s.kind = DistributionKind::GaussianMixture;
    s.dim = dim;
    s.components = std::move(components);
    s.seed = seed;
    s.validate();
    return s;
  }

  static DistributionSpec truncated_gaussian(std::vector<double> lo, std::vector<double> hi, std::vector<double> mean,
                                             double sigma, std::uint64_t seed) {
    DistributionSpec s;
    s.kind = DistributionKind::TruncatedGaussian;
    s.dim = static_cast<int>(lo.size());
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    s.mean = std::move(mean);
    s.sigma = sigma;
    s.seed = seed;
    s.validate();
    return s;
  }

  void validate() const {
    if (dim < 1) throw_validation("synth", "dimension must be positive");
    const bool has_box = kind == DistributionKind::UniformBox || kind == DistributionKind::TruncatedGaussian;
    if (has_box) {
      if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw_validation("synth", "box bounds must have one entry per dimension");
      for (int j = 0; j < dim; ++j) {
        if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || !(lo[j] < hi[j]))
          throw_validation("synth", "box bounds must satisfy lo < hi componentwise");
      }
    }
    const bool has_center = kind == DistributionKind::Gaussian || kind == DistributionKind::TruncatedGaussian;
    if (has_center) {
      if (static_cast<int>(mean.size()) != dim)
        throw_validation("synth", "mean must have one entry per dimension");
      for (double m : mean)
        if (!std::isfinite(m)) throw_validation("synth", "mean must be finite");
      if (!std::isfinite(sigma) || !(sigma > 0.0)) throw_validation("synth", "sigma must be positive");
    }
    if (kind == DistributionKind::GaussianMixture) {
      if (components.empty()) throw_validation("synth", "mixture needs at least one component");
      double wsum = 0.0;
      for (const MixtureComponent& c : components) {
        if (!std::isfinite(c.weight) || !(c.weight > 0.0))
          throw_validation("synth", "mixture weights must be positive");
        if (static_cast<int>(c.mean.size()) != dim)
          throw_validation("synth", "mixture component mean must have one entry per dimension");
        for (double m : c.mean)
          if (!std::isfinite(m)) throw_validation("synth", "mixture component mean must be finite");
        if (!std::isfinite(c.sigma) || !(c.sigma > 0.0))
          throw_validation("synth", "mixture component sigma must be positive");
        wsum += c.weight;
      }
      if (std::fabs(wsum - 1.0) > 1e-12)
        throw_validation("synth", "mixture weights must sum to 1");
    }
  }

  std::string name() const {
    switch (kind) {
      case DistributionKind::UniformBox: return "uniform";
      case DistributionKind::Gaussian: return "gaussian";
      case DistributionKind::GaussianMixture: return "mixture";
      case DistributionKind::TruncatedGaussian: return "truncated-gaussian";
    }
    return "?";
  }
};

// n i.i.d. draws; a pure function of (spec, n, substream), so repetition r of
// a study samples substream r and never touches another repetition's stream.
inline Dataset sample(const DistributionSpec& spec, std::int64_t n, std::uint64_t substream = 0) {
  spec.validate();
  if (n < 2) throw_validation("synth", "sample size must be at least 2");
  CounterRng rng = CounterRng(spec.seed).substream(substream);
  std::vector<double> pts(static_cast<std::size_t>(n) * spec.dim);

  switch (spec.kind) {
    case DistributionKind::UniformBox: {
      for (std::int64_t i = 0; i < n; ++i)
        for (int j = 0; j < spec.dim; ++j)
          pts[static_cast<std::size_t>(i) * spec.dim + j] = rng.uniform(spec.lo[j], spec.hi[j]);
      break;
    }
    case DistributionKind::Gaussian: {
      for (std::int64_t i = 0; i < n; ++i)
        for (int j = 0; j < spec.dim; ++j)
          pts[static_cast<std::size_t>(i) * spec.dim + j] = rng.normal(spec.mean[j], spec.sigma);
      break;
    }
    case DistributionKind::GaussianMixture: {
      for (std::int64_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        double acc = 0.0;
        const MixtureComponent* comp = &spec.components.back();
        for (const MixtureComponent& c : spec.components) {
          acc += c.weight;
          if (u < acc) {
            comp = &c;
            break;
          }
        }
        for (int j = 0; j < spec.dim; ++j)
          pts[static_cast<std::size_t>(i) * spec.dim + j] = rng.normal(comp->mean[j], comp->sigma);
      }
      break;
    }
    case DistributionKind::TruncatedGaussian: {
      // Axis-aligned box with isotropic covariance factorizes into 1-D
      // truncated normals, so coordinates reject independently.
      constexpr int kMaxTries = 1000000;
      for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < spec.dim; ++j) {
          double v = 0.0;
          int tries = 0;
          do {
            if (++tries > kMaxTries)
              throw_numeric("synth", "truncated-gaussian acceptance rate too low; widen the box or sigma");
            v = rng.normal(spec.mean[j], spec.sigma);
          } while (v < spec.lo[j] || v > spec.hi[j]);
          pts[static_cast<std::size_t>(i) * spec.dim + j] = v;
        }
      }
      break;
    }
  }
  return Dataset::from_points(std::move(pts), spec.dim);
}

namespace detail {

// Adaptive Simpson with the 15x error rule and Richardson tail correction.
inline double simpson_segment(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double m, double b, double fa,
                                   double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_segment(a, m, fa, flm, fm);
  const double right = simpson_segment(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson_segment(a, b, fa, fm, fb);
  return adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

// Numerically integrated behavioral entropy of a 1-D Gaussian: the integrand
// beta * exp(-beta s) * s with s the sgn-power of -log f decays like the
// density itself, so +-10 sigma captures the mass to well below the tolerance.
inline double be_gaussian_quadrature_1d(double mean, double sigma, const WeightingParams& params,
                                        double tol = 1e-9) {
  params.validate();
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mean))
    throw_validation("synth", "gaussian parameters must be finite with positive sigma");
  const double log_norm = std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi);
  const auto integrand = [&](double x) {
    const double z = (x - mean) / sigma;
    const double neg_log_f = 0.5 * z * z + log_norm;
    const double s = signed_pow(neg_log_f, params.alpha);
    return params.beta * std::exp(-params.beta * s) * s;
  };
  return detail::adaptive_simpson(integrand, mean - 10.0 * sigma, mean + 10.0 * sigma, tol);
}

// Exact (or quadrature) entropy of the estimator's target functional, when
// one is known for this distribution; empty otherwise (callers needing ground
// truth for mixtures run a high-n reference estimate instead).
inline std::optional<double> analytic_entropy(const DistributionSpec& spec, const EstimatorSpec& target) {
  spec.validate();
  target.validate();
  const bool behavioral = target.kind == EstimatorKind::BENaive || target.kind == EstimatorKind::BECorrected;

  switch (spec.kind) {
    case DistributionKind::UniformBox: {
      double log_volume = 0.0;
      for (int j = 0; j < spec.dim; ++j) log_volume += std::log(spec.hi[j] - spec.lo[j]);
      if (!behavioral) return log_volume; // Shannon and every Renyi order coincide on a constant density
      return be_analytic_uniform(std::exp(log_volume), target.weighting.params());
    }
    case DistributionKind::Gaussian: {
      const double d = static_cast<double>(spec.dim);
      switch (target.kind) {
        case EstimatorKind::ShannonPlugin:
          return 0.5 * d * std::log(2.0 * std::numbers::pi * std::numbers::e) + d * std::log(spec.sigma);
        case EstimatorKind::RenyiPlugin:
          return 0.5 * d * std::log(2.0 * std::numbers::pi * spec.sigma * spec.sigma) +
                 0.5 * d * std::log(target.q) / (target.q - 1.0);
        case EstimatorKind::BENaive:
        case EstimatorKind::BECorrected:
          if (spec.dim != 1) return std::nullopt;
          return be_gaussian_quadrature_1d(spec.mean[0], spec.sigma, target.weighting.params());
      }
      return std::nullopt;
    }
    case DistributionKind::GaussianMixture:
    case DistributionKind::TruncatedGaussian:
      return std::nullopt;
  }
  return std::nullopt;
}

} // namespace behent
