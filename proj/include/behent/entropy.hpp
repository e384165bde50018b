#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/density.hpp"
#include "behent/error.hpp"
#include "behent/neighbors.hpp"
#include "behent/util.hpp"
#include "behent/weighting.hpp"

namespace behent {

enum class EstimatorKind { ShannonPlugin, RenyiPlugin, BENaive, BECorrected };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::ShannonPlugin;
  double q = 1.0;                                       // Renyi order, RenyiPlugin only
  WeightingFunction weighting = WeightingFunction::identity(); // BE kinds only

  static EstimatorSpec shannon() { return {}; }

  static EstimatorSpec renyi(double q) {
    EstimatorSpec s;
    s.kind = EstimatorKind::RenyiPlugin;
    s.q = q;
    return s;
  }

  static EstimatorSpec be_naive(const WeightingParams& w) {
    EstimatorSpec s;
    s.kind = EstimatorKind::BENaive;
    s.weighting = WeightingFunction::prelec(w);
    return s;
  }

  static EstimatorSpec be_corrected(const WeightingParams& w) {
    EstimatorSpec s;
    s.kind = EstimatorKind::BECorrected;
    s.weighting = WeightingFunction::prelec(w);
    return s;
  }

  void validate() const {
    if (kind == EstimatorKind::RenyiPlugin) {
      if (!std::isfinite(q) || q <= 0.0)
        throw_validation("entropy", "Renyi order must be positive and finite");
      if (q == 1.0)
        throw_validation("entropy", "Renyi order 1 is the Shannon limit; use the shannon estimator");
    }
  }

  std::string name() const {
    switch (kind) {
      case EstimatorKind::ShannonPlugin: return "shannon";
      case EstimatorKind::RenyiPlugin: return "renyi";
      case EstimatorKind::BENaive: return "be-naive";
      case EstimatorKind::BECorrected: return "be";
    }
    return "?";
  }
};

struct EntropyEstimate {
  double value = 0.0;
  EstimatorSpec spec;
  int k = 0;
  std::int64_t n = 0;
  int d = 0;
};

struct EstimateOptions {
  NeighborBackend backend = NeighborBackend::SpatialTree;
  int threads = 1;
};

// Reduce per-point log-densities to an entropy value. Sums run in row order
// regardless of thread count, so results are reproducible bit for bit.
inline EntropyEstimate entropy_from_log_density(const DensityEstimate& density, const EstimatorSpec& spec) {
  spec.validate();
  const std::int64_t n = density.n;
  if (n < 2 || density.log_values.size() != static_cast<std::size_t>(n))
    throw_validation("entropy", "density estimate is empty or inconsistent");

  double value = 0.0;
  switch (spec.kind) {
    case EstimatorKind::ShannonPlugin: {
      double sum = 0.0;
      for (double lf : density.log_values) sum += -lf;
      value = sum / static_cast<double>(n);
      break;
    }
    case EstimatorKind::RenyiPlugin: {
      // (1 / (1-q)) log( (1/n) sum f^(q-1) ), evaluated via log-sum-exp.
      std::vector<double> terms(density.log_values.size());
      for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = (spec.q - 1.0) * density.log_values[i];
      value = (log_sum_exp(terms) - std::log(static_cast<double>(n))) / (1.0 - spec.q);
      break;
    }
    case EstimatorKind::BENaive: {
      // -(1/n) sum w(f) log w(f)
      double sum = 0.0;
      for (double lf : density.log_values) sum += spec.weighting.neg_w_log_w_from_log(lf);
      value = sum / static_cast<double>(n);
      break;
    }
    case EstimatorKind::BECorrected: {
      // -(1/n) sum (1/f) w(f) log w(f); the 1/f factor undoes the sampling
      // density so the sum approximates the integral of -w(f) log w(f).
      double sum = 0.0;
      for (double lf : density.log_values) {
        const double lw = spec.weighting.log_weight_from_log(lf);
        sum += std::exp(lw - lf) * -lw;
      }
      value = sum / static_cast<double>(n);
      break;
    }
  }

  if (!std::isfinite(value))
    throw_numeric("entropy", spec.name() + " estimate is not finite");

  EntropyEstimate out;
  out.value = value;
  out.spec = spec;
  out.k = density.k;
  out.n = n;
  out.d = density.d;
  return out;
}

inline EntropyEstimate estimate_entropy(const Dataset& data, const EstimatorSpec& spec, int k,
                                        const EstimateOptions& opts = {}) {
  spec.validate();
  const DensityEstimate density = knn_log_density(data, k, opts.backend, opts.threads);
  return entropy_from_log_density(density, spec);
}

inline EntropyEstimate shannon_knn(const Dataset& data, int k, const EstimateOptions& opts = {}) {
  return estimate_entropy(data, EstimatorSpec::shannon(), k, opts);
}

inline EntropyEstimate renyi_knn(const Dataset& data, double q, int k, const EstimateOptions& opts = {}) {
  return estimate_entropy(data, EstimatorSpec::renyi(q), k, opts);
}

inline EntropyEstimate be_naive_knn(const Dataset& data, const WeightingParams& w, int k,
                                    const EstimateOptions& opts = {}) {
  return estimate_entropy(data, EstimatorSpec::be_naive(w), k, opts);
}

inline EntropyEstimate be_corrected_knn(const Dataset& data, const WeightingParams& w, int k,
                                        const EstimateOptions& opts = {}) {
  return estimate_entropy(data, EstimatorSpec::be_corrected(w), k, opts);
}

// Behavioral entropy of the uniform density over a region of volume V:
// with s = sgn-power of log V, the integral collapses to V * beta * s * exp(-beta s).
inline double be_analytic_uniform(double volume, const WeightingParams& params) {
  params.validate();
  if (!(volume > 0.0) || !std::isfinite(volume))
    throw_validation("entropy", "volume must be positive and finite");
  const double s = signed_pow(std::log(volume), params.alpha);
  return volume * params.beta * s * std::exp(-params.beta * s);
}

} // namespace behent
