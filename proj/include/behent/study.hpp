#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "behent/entropy.hpp"
#include "behent/error.hpp"
#include "behent/synth.hpp"
#include "behent/util.hpp"

namespace behent {

// Neighbor depth as a power of the sample size. Exponents in (0,1) keep
// k -> inf, k/n -> 0, and k/log n -> inf, the regime where the plug-in
// estimators converge.
struct KSchedule {
  double exponent = 0.5;

  void validate() const {
    if (!std::isfinite(exponent) || exponent <= 0.0 || exponent >= 1.0)
      throw_validation("study", "k-schedule exponent must lie in (0, 1)");
  }

  int k_for(std::int64_t n) const {
    validate();
    const double raw = std::ceil(std::pow(static_cast<double>(n), exponent));
    return static_cast<int>(raw);
  }
};

struct StudyCell {
  std::int64_t n = 0;
  int k = 0;
  double mean = 0.0;
  double mae = 0.0;      // mean absolute error against the analytic value
  double variance = 0.0; // sample variance over repetitions
};

struct StudyReport {
  std::vector<StudyCell> cells;
  double variance_slope = 0.0; // fitted slope of log variance vs log n
  int repetitions = 0;
  double oracle = 0.0;
};

// Monte-Carlo bias/variance sweep of an estimator across sample sizes.
// Repetition r of cell c samples substream c*repetitions + r, so every cell
// is reproducible in isolation; reductions run in grid order.
inline StudyReport convergence_study(const DistributionSpec& family, const EstimatorSpec& estimator,
                                     const std::vector<std::int64_t>& n_grid, const KSchedule& schedule,
                                     int repetitions, std::uint64_t seed, const EstimateOptions& opts = {}) {
  family.validate();
  estimator.validate();
  schedule.validate();
  if (n_grid.empty()) throw_validation("study", "n grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 4) throw_validation("study", "grid sizes must be at least 4");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw_validation("study", "n grid must be strictly increasing");
    if (schedule.k_for(n_grid[i]) > n_grid[i] - 1)
      throw_validation("study", "k schedule exceeds n-1 at n=" + std::to_string(n_grid[i]));
  }
  if (repetitions < 5) throw_validation("study", "at least 5 repetitions required");

  const std::optional<double> oracle = analytic_entropy(family, estimator);
  if (!oracle)
    throw_validation("study", "no analytic entropy for " + family.name() + " with the " + estimator.name() +
                                  " estimator; use a distribution with a closed form");

  DistributionSpec seeded = family;
  seeded.seed = seed;

  StudyReport report;
  report.repetitions = repetitions;
  report.oracle = *oracle;
  report.cells.reserve(n_grid.size());

  std::vector<double> log_n, log_var;
  for (std::size_t ci = 0; ci < n_grid.size(); ++ci) {
    const std::int64_t n = n_grid[ci];
    const int k = schedule.k_for(n);
    std::vector<double> estimates(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      const std::uint64_t sub = static_cast<std::uint64_t>(ci) * repetitions + static_cast<std::uint64_t>(rep);
      const Dataset ds = sample(seeded, n, sub);
      estimates[static_cast<std::size_t>(rep)] = estimate_entropy(ds, estimator, k, opts).value;
    }
    StudyCell cell;
    cell.n = n;
    cell.k = k;
    double sum = 0.0, abs_err = 0.0;
    for (double e : estimates) {
      sum += e;
      abs_err += std::fabs(e - *oracle);
    }
    cell.mean = sum / repetitions;
    cell.mae = abs_err / repetitions;
    double sq = 0.0;
    for (double e : estimates) sq += (e - cell.mean) * (e - cell.mean);
    cell.variance = sq / (repetitions - 1);
    report.cells.push_back(cell);

    if (cell.variance <= 0.0)
      throw_numeric("study", "degenerate zero variance at n=" + std::to_string(n));
    log_n.push_back(std::log(static_cast<double>(n)));
    log_var.push_back(std::log(cell.variance));
  }

  report.variance_slope = n_grid.size() >= 2 ? fit_slope(log_n, log_var) : 0.0;
  return report;
}

} // namespace behent
