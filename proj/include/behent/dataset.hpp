#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "behent/error.hpp"

namespace behent {

// An n x d matrix of sample points in row-major order, with optional per-row
// action vectors, episode ids, step indices and rewards. Columns beyond the
// states are carried through relabeling and serialization untouched.
struct Dataset {
  std::int64_t n = 0;
  int d = 0;
  std::vector<double> points; // n * d

  int action_dim = 0;
  std::vector<double> actions;      // n * action_dim, or empty
  std::vector<std::int64_t> episodes; // n or empty
  std::vector<std::int64_t> steps;    // n or empty
  std::vector<double> rewards;        // n or empty

  std::span<const double> row(std::int64_t i) const {
    return {points.data() + i * d, static_cast<std::size_t>(d)};
  }

  std::span<const double> action_row(std::int64_t i) const {
    return {actions.data() + i * action_dim, static_cast<std::size_t>(action_dim)};
  }

  bool has_actions() const { return action_dim > 0; }
  bool has_episodes() const { return !episodes.empty(); }
  bool has_steps() const { return !steps.empty(); }
  bool has_rewards() const { return !rewards.empty(); }

  static Dataset from_points(std::vector<double> pts, int dim) {
    Dataset ds;
    if (dim < 1) throw_validation("dataset", "dimension must be >= 1");
    if (pts.size() % static_cast<std::size_t>(dim) != 0)
      throw_validation("dataset", "point buffer size is not a multiple of the dimension");
    ds.d = dim;
    ds.n = static_cast<std::int64_t>(pts.size()) / dim;
    ds.points = std::move(pts);
    ds.validate();
    return ds;
  }

  void validate() const {
    if (d < 1) throw_validation("dataset", "dimension must be >= 1");
    if (n < 2) throw_validation("dataset", "at least 2 sample points required");
    if (points.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d))
      throw_validation("dataset", "point buffer does not match n*d");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!std::isfinite(points[i]))
        throw_validation("dataset", "non-finite state value at row " +
                                        std::to_string(i / static_cast<std::size_t>(d)));
    }
    if (action_dim < 0) throw_validation("dataset", "negative action dimension");
    if (actions.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(action_dim))
      throw_validation("dataset", "action buffer does not match n*action_dim");
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (!std::isfinite(actions[i]))
        throw_validation("dataset", "non-finite action value at row " +
                                        std::to_string(i / static_cast<std::size_t>(action_dim)));
    }
    auto check_len = [this](std::size_t len, const char* what) {
      if (len != 0 && len != static_cast<std::size_t>(n))
        throw_validation("dataset", std::string(what) + " column length does not match n");
    };
    check_len(episodes.size(), "episode");
    check_len(steps.size(), "step");
    check_len(rewards.size(), "reward");
    for (std::size_t i = 0; i < rewards.size(); ++i) {
      if (!std::isfinite(rewards[i]))
        throw_validation("dataset", "non-finite reward value at row " + std::to_string(i));
    }
  }
};

} // namespace behent
