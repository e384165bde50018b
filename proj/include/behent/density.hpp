#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/error.hpp"
#include "behent/neighbors.hpp"
#include "behent/util.hpp"

namespace behent {

// log of the volume of the unit ball in R^d: (d/2) log pi - log Gamma(d/2 + 1).
inline double log_unit_ball_volume(int d) {
  if (d < 1) throw_validation("density", "dimension must be positive");
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

// log of n * V_d / k, the offset relating a k-th neighbor distance to a
// log-density: log f(x_i) = -(offset + d * log R_i).
inline double log_density_offset(int k, std::int64_t n, int d) {
  if (k < 1) throw_validation("density", "k must be positive");
  if (n < 2) throw_validation("density", "n must be at least 2");
  return std::log(static_cast<double>(n)) + log_unit_ball_volume(d) - std::log(static_cast<double>(k));
}

struct DensityEstimate {
  std::vector<double> log_values; // log f(x_i), one per dataset row
  int k = 0;
  std::int64_t n = 0;
  int d = 0;

  double value(std::int64_t i) const { return std::exp(log_values[static_cast<std::size_t>(i)]); }
};

// k-th nearest-neighbor density estimate at every dataset point, the point
// itself excluded from its own neighborhood. Evaluated in log space so small
// densities in high dimension stay representable.
inline DensityEstimate knn_log_density(const Dataset& data, const NeighborIndex& index, int k, int threads = 1) {
  if (index.size() != data.n || index.dim() != data.d)
    throw_validation("density", "index does not match dataset");
  if (k < 1 || k > data.n - 1)
    throw_validation("density", "k out of range: k=" + std::to_string(k) + ", n=" + std::to_string(data.n));

  DensityEstimate est;
  est.k = k;
  est.n = data.n;
  est.d = data.d;
  est.log_values.assign(static_cast<std::size_t>(data.n), 0.0);

  const double offset = log_density_offset(k, data.n, data.d);
  const double d_real = static_cast<double>(data.d);
  std::vector<std::int64_t> degenerate;

  parallel_for(data.n, threads, [&](std::int64_t i) {
    const double r = index.knn_distance(i, k);
    est.log_values[static_cast<std::size_t>(i)] = -(offset + d_real * std::log(r));
  });

  for (std::int64_t i = 0; i < data.n; ++i) {
    if (!std::isfinite(est.log_values[static_cast<std::size_t>(i)])) degenerate.push_back(i);
  }
  if (!degenerate.empty()) {
    std::string rows;
    for (std::size_t j = 0; j < degenerate.size() && j < 8; ++j) {
      if (j) rows += ", ";
      rows += std::to_string(degenerate[j]);
    }
    if (degenerate.size() > 8) rows += ", ...";
    throw_numeric("density",
                  "zero k-th neighbor distance (duplicate points) at rows " + rows +
                      "; increase k past the duplicate count or deduplicate the data");
  }
  return est;
}

inline DensityEstimate knn_log_density(const Dataset& data, int k, NeighborBackend backend = NeighborBackend::SpatialTree,
                                       int threads = 1) {
  const NeighborIndex index = NeighborIndex::build(data, backend);
  return knn_log_density(data, index, k, threads);
}

} // namespace behent
