#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/density.hpp"
#include "behent/error.hpp"
#include "behent/neighbors.hpp"
#include "behent/util.hpp"
#include "behent/weighting.hpp"

namespace behent {

enum class RewardObjective { Behavioral, ShannonBaseline };

struct RewardConfig {
  WeightingParams weighting;
  int k = 12;
  double c = 1.0; // log stabilizer; >= 1 keeps log(R+c) >= 0 and rewards real for every alpha
  RewardObjective objective = RewardObjective::Behavioral;
  bool average_top_k = true; // reward the mean of the k nearest distances instead of the k-th

  void validate() const {
    weighting.validate();
    if (k < 1) throw_validation("rewards", "k must be at least 1");
    if (!std::isfinite(c) || c < 1.0)
      throw_validation("rewards", "c must be >= 1 so the log term stays nonnegative");
  }
};

namespace detail {

inline double be_reward_core(double r, double alpha, double beta, double c) {
  const double s = signed_pow(std::log(r + c), alpha);
  return r * std::exp(-beta * s) * s;
}

inline double check_distance(double r) {
  if (!std::isfinite(r) || r < 0.0)
    throw_validation("rewards", "distance must be nonnegative and finite");
  return r;
}

} // namespace detail

// Intrinsic reward R * exp(-beta L^alpha) * L^alpha with L = log(R + c):
// the per-sample integrand of the weighted-entropy objective with the
// additive density constant dropped and the dimension exponent collapsed.
inline double be_reward(double distance, const RewardConfig& cfg) {
  cfg.validate();
  detail::check_distance(distance);
  return detail::be_reward_core(distance, cfg.weighting.alpha, cfg.weighting.beta, cfg.c);
}

// The unweighted counterpart, log(c + R); the standard particle-based
// entropy bonus.
inline double shannon_baseline_reward(double distance, double c) {
  detail::check_distance(distance);
  if (!std::isfinite(c) || c < 1.0) throw_validation("rewards", "c must be >= 1");
  return std::log(c + distance);
}

inline double reward_for(double distance, const RewardConfig& cfg) {
  if (cfg.objective == RewardObjective::ShannonBaseline) return shannon_baseline_reward(distance, cfg.c);
  return be_reward(distance, cfg);
}

// Exact-mode reward keeping the state dimension and the additive constant
// log(n V_d / k) that the exposed reward drops: averaging these over a
// dataset reproduces the corrected entropy estimate. Test oracle only.
inline double be_reward_unsimplified(double distance, const WeightingParams& w, int d, std::int64_t n, int k) {
  w.validate();
  detail::check_distance(distance);
  if (distance == 0.0)
    throw_numeric("rewards", "exact-mode reward undefined at zero distance (duplicate points)");
  const double t = log_density_offset(k, n, d) + static_cast<double>(d) * std::log(distance);
  const double s = signed_pow(t, w.alpha);
  return std::exp(t) * w.beta * s * std::exp(-w.beta * s);
}

struct TransitionRecord {
  std::vector<double> state;
  std::optional<std::vector<double>> action;
  double reward = 0.0;
  std::int64_t episode = 0;
  std::int64_t step = 0;
};

// Replace every reward in a trajectory dataset with the nearest-neighbor
// intrinsic reward, preserving row order. Rows without episode/step metadata
// get episode 0 and 1-based step indices.
inline std::vector<TransitionRecord> relabel(const Dataset& data, const RewardConfig& cfg,
                                             NeighborBackend backend = NeighborBackend::SpatialTree,
                                             int threads = 1) {
  data.validate();
  cfg.validate();
  if (cfg.k > data.n - 1)
    throw_validation("rewards", "k=" + std::to_string(cfg.k) + " needs at least k+1 points, have " +
                                    std::to_string(data.n));

  const NeighborIndex index = NeighborIndex::build(data, backend);
  const double alpha = cfg.weighting.alpha;
  const double beta = cfg.weighting.beta;
  const bool baseline = cfg.objective == RewardObjective::ShannonBaseline;

  std::vector<double> rewards(static_cast<std::size_t>(data.n));
  parallel_for(data.n, threads, [&](std::int64_t i) {
    double r;
    if (cfg.average_top_k) {
      const std::vector<double> dists = index.knn_distances(i, cfg.k);
      double sum = 0.0;
      for (double v : dists) sum += v;
      r = sum / cfg.k;
    } else {
      r = index.knn_distance(i, cfg.k);
    }
    rewards[static_cast<std::size_t>(i)] =
        baseline ? std::log(cfg.c + r) : detail::be_reward_core(r, alpha, beta, cfg.c);
  });

  std::vector<TransitionRecord> records;
  records.reserve(static_cast<std::size_t>(data.n));
  for (std::int64_t i = 0; i < data.n; ++i) {
    TransitionRecord rec;
    const std::span<const double> row = data.row(i);
    rec.state.assign(row.begin(), row.end());
    if (data.has_actions()) {
      const std::span<const double> act = data.action_row(i);
      rec.action = std::vector<double>(act.begin(), act.end());
    }
    rec.reward = rewards[static_cast<std::size_t>(i)];
    rec.episode = data.has_episodes() ? data.episodes[static_cast<std::size_t>(i)] : 0;
    rec.step = data.has_steps() ? data.steps[static_cast<std::size_t>(i)] : i + 1;
    records.push_back(std::move(rec));
  }
  return records;
}

struct RewardCurveEntry {
  bool baseline = false; // true for the unweighted reference series
  double alpha = 0.0;    // meaningful only when baseline is false
  double r = 0.0;
  double reward = 0.0;
};

// Tabulate reward(R) for each configuration over a grid of distances, for
// plotting how the alpha family reshapes the incentive.
inline std::vector<RewardCurveEntry> reward_curve(const std::vector<RewardConfig>& configs,
                                                  const std::vector<double>& r_grid) {
  if (configs.empty()) throw_validation("rewards", "curve needs at least one configuration");
  if (r_grid.empty()) throw_validation("rewards", "curve needs a nonempty distance grid");
  for (const RewardConfig& cfg : configs) cfg.validate();
  for (double r : r_grid) detail::check_distance(r);

  std::vector<RewardCurveEntry> out;
  out.reserve(configs.size() * r_grid.size());
  for (const RewardConfig& cfg : configs) {
    const bool baseline = cfg.objective == RewardObjective::ShannonBaseline;
    for (double r : r_grid) {
      RewardCurveEntry e;
      e.baseline = baseline;
      e.alpha = cfg.weighting.alpha;
      e.r = r;
      e.reward = baseline ? std::log(cfg.c + r) : detail::be_reward_core(r, cfg.weighting.alpha, cfg.weighting.beta, cfg.c);
      out.push_back(e);
    }
  }
  return out;
}

} // namespace behent
