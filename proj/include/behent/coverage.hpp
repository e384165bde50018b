#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/error.hpp"
#include "behent/rng.hpp"

namespace behent {

struct MinBall {
  std::vector<double> center;
  double radius = 0.0;
  std::vector<std::int64_t> support; // <= d+1 point indices on the boundary
};

namespace detail {

// Exact smallest enclosing ball, Welzl's algorithm with move-to-front.
// The point scan is a loop; recursion only grows the support set, so the
// depth is bounded by d+2 regardless of how many points there are.
class WelzlSolver {
public:
  WelzlSolver(const double* pts, std::int64_t m, int d) : pts_(pts), m_(m), d_(d) {
    order_.resize(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) order_[static_cast<std::size_t>(i)] = i;
  }

  MinBall solve() {
    support_.clear();
    compute(m_);
    MinBall out;
    out.center = center_;
    out.radius = radius2_ > 0.0 ? std::sqrt(radius2_) : 0.0;
    out.support = result_support_;
    return out;
  }

private:
  const double* pts_;
  std::int64_t m_;
  int d_;
  std::vector<std::int64_t> order_;          // move-to-front list
  std::vector<std::int64_t> support_;        // current basis
  std::vector<std::int64_t> result_support_; // basis of the ball currently held
  std::vector<double> center_;
  double radius2_ = -1.0;

  const double* point(std::int64_t i) const { return pts_ + i * d_; }

  bool outside(std::int64_t i) const {
    if (radius2_ < 0.0) return true;
    const double* p = point(i);
    double dist2 = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double t = p[j] - center_[j];
      dist2 += t * t;
    }
    return dist2 > radius2_ + 1e-10 * std::max(1.0, radius2_);
  }

  // Ball over the first `count` list entries with the current support pinned
  // to the boundary. A point outside the running ball must lie on the
  // boundary of the prefix's ball, so it joins the support and the prefix is
  // re-solved; the recursion's result is already the running ball for the
  // rest of the scan.
  void compute(std::int64_t count) {
    ball_of_support();
    if (static_cast<int>(support_.size()) == d_ + 1) return;
    for (std::int64_t pos = 0; pos < count; ++pos) {
      const std::int64_t p = order_[static_cast<std::size_t>(pos)];
      if (!outside(p)) continue;
      support_.push_back(p);
      compute(pos);
      support_.pop_back();
      // move-to-front: points that forced a rebuild are likely extreme
      for (std::int64_t q = pos; q > 0; --q)
        order_[static_cast<std::size_t>(q)] = order_[static_cast<std::size_t>(q - 1)];
      order_[0] = p;
    }
  }

  // Smallest ball with every support point on its boundary: center
  // q0 + sum lambda_i (q_i - q0), from the linear system
  // 2 (q_i - q0).(q_j - q0) lambda_j = |q_i - q0|^2.
  void ball_of_support() {
    result_support_ = support_; // every ball change passes through here, so
                                // the last snapshot certifies the final ball
    center_.assign(static_cast<std::size_t>(d_), 0.0);
    if (support_.empty()) {
      radius2_ = -1.0;
      return;
    }
    const double* q0 = point(support_[0]);
    const int m = static_cast<int>(support_.size()) - 1;
    if (m == 0) {
      center_.assign(q0, q0 + d_);
      radius2_ = 0.0;
      return;
    }

    std::vector<double> v(static_cast<std::size_t>(m) * d_);
    for (int i = 0; i < m; ++i) {
      const double* qi = point(support_[static_cast<std::size_t>(i) + 1]);
      for (int j = 0; j < d_; ++j) v[static_cast<std::size_t>(i) * d_ + j] = qi[j] - q0[j];
    }
    // A lambda = b, A_ij = 2 v_i.v_j, b_i = |v_i|^2
    std::vector<double> a(static_cast<std::size_t>(m) * m), b(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double dot = 0.0;
        for (int t = 0; t < d_; ++t)
          dot += v[static_cast<std::size_t>(i) * d_ + t] * v[static_cast<std::size_t>(j) * d_ + t];
        a[static_cast<std::size_t>(i) * m + j] = 2.0 * dot;
      }
      b[static_cast<std::size_t>(i)] = 0.5 * a[static_cast<std::size_t>(i) * m + i];
    }
    solve_linear(a, b, m);

    radius2_ = 0.0;
    for (int j = 0; j < d_; ++j) {
      double off = 0.0;
      for (int i = 0; i < m; ++i) off += b[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i) * d_ + j];
      center_[static_cast<std::size_t>(j)] = q0[j] + off;
      radius2_ += off * off;
    }
  }

  // Gaussian elimination with partial pivoting; solution lands in b.
  void solve_linear(std::vector<double>& a, std::vector<double>& b, int m) const {
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::fabs(x));
    const double eps = std::max(scale, 1.0) * 1e-14;
    for (int col = 0; col < m; ++col) {
      int pivot = col;
      for (int r = col + 1; r < m; ++r)
        if (std::fabs(a[static_cast<std::size_t>(r) * m + col]) >
            std::fabs(a[static_cast<std::size_t>(pivot) * m + col]))
          pivot = r;
      if (std::fabs(a[static_cast<std::size_t>(pivot) * m + col]) <= eps)
        throw_numeric("coverage", "degenerate support set in enclosing-ball solve");
      if (pivot != col) {
        for (int cc = 0; cc < m; ++cc)
          std::swap(a[static_cast<std::size_t>(pivot) * m + cc], a[static_cast<std::size_t>(col) * m + cc]);
        std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
      }
      const double inv = 1.0 / a[static_cast<std::size_t>(col) * m + col];
      for (int r = col + 1; r < m; ++r) {
        const double f = a[static_cast<std::size_t>(r) * m + col] * inv;
        if (f == 0.0) continue;
        for (int cc = col; cc < m; ++cc)
          a[static_cast<std::size_t>(r) * m + cc] -= f * a[static_cast<std::size_t>(col) * m + cc];
        b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
      }
    }
    for (int col = m - 1; col >= 0; --col) {
      double acc = b[static_cast<std::size_t>(col)];
      for (int cc = col + 1; cc < m; ++cc) acc -= a[static_cast<std::size_t>(col) * m + cc] * b[static_cast<std::size_t>(cc)];
      b[static_cast<std::size_t>(col)] = acc / a[static_cast<std::size_t>(col) * m + col];
    }
  }
};

} // namespace detail

// points are row-major, m rows by d columns.
inline MinBall min_enclosing_ball(std::span<const double> points, int d) {
  if (d < 1) throw_validation("coverage", "dimension must be positive");
  if (d > 32) throw_validation("coverage", "dimension capped at 32 for the exact enclosing-ball solve");
  if (points.empty() || points.size() % static_cast<std::size_t>(d) != 0)
    throw_validation("coverage", "point buffer size must be a positive multiple of the dimension");
  for (double x : points)
    if (!std::isfinite(x)) throw_validation("coverage", "points must be finite");
  const std::int64_t m = static_cast<std::int64_t>(points.size()) / d;
  detail::WelzlSolver solver(points.data(), m, d);
  return solver.solve();
}

struct CoverageOptions {
  std::int64_t samples_per_increment = 10000;
  std::int64_t increment = 50000;
  std::uint64_t seed = 0;
  std::optional<double> normalize_base; // default: the largest radius in this run
  bool steps_from_index = false;        // synthesize 1-based steps from row order
};

struct CoverageCheckpoint {
  std::int64_t step = 0; // increment boundary
  double radius = 0.0;
  double normalized = 0.0;
  bool truncated = false; // increment had fewer rows than requested
};

struct CoverageCurve {
  std::vector<CoverageCheckpoint> checkpoints;
  std::int64_t samples_per_increment = 0;
  std::int64_t increment = 0;
  std::uint64_t seed = 0;
  double normalize_base = 0.0;
};

// Radius growth of the cumulative pool: at each boundary T, draw
// samples_per_increment rows without replacement from steps in (T-inc, T],
// add them to the pool, and measure its smallest enclosing ball.
inline CoverageCurve coverage_curve(const Dataset& data, const CoverageOptions& opts = {}) {
  data.validate();
  if (opts.samples_per_increment < 1) throw_validation("coverage", "samples per increment must be positive");
  if (opts.increment < 1) throw_validation("coverage", "increment must be positive");
  if (opts.normalize_base && (!std::isfinite(*opts.normalize_base) || *opts.normalize_base <= 0.0))
    throw_validation("coverage", "normalization base must be positive");
  if (!opts.steps_from_index && !data.has_steps())
    throw_validation("coverage", "dataset has no step column; supply steps or index-derived steps");

  std::vector<std::int64_t> steps(static_cast<std::size_t>(data.n));
  for (std::int64_t i = 0; i < data.n; ++i)
    steps[static_cast<std::size_t>(i)] = opts.steps_from_index ? i + 1 : data.steps[static_cast<std::size_t>(i)];
  std::int64_t max_step = 0;
  for (std::int64_t s : steps) max_step = std::max(max_step, s);
  if (max_step < 1) throw_validation("coverage", "step indices span no increment");

  const std::int64_t boundaries = (max_step + opts.increment - 1) / opts.increment;
  std::vector<std::vector<std::int64_t>> buckets(static_cast<std::size_t>(boundaries));
  for (std::int64_t i = 0; i < data.n; ++i) {
    const std::int64_t s = steps[static_cast<std::size_t>(i)];
    if (s < 1) continue; // before the first boundary's window
    const std::int64_t j = (s + opts.increment - 1) / opts.increment;
    buckets[static_cast<std::size_t>(j - 1)].push_back(i);
  }

  CounterRng base(opts.seed);
  std::vector<double> pool;
  CoverageCurve curve;
  curve.samples_per_increment = opts.samples_per_increment;
  curve.increment = opts.increment;
  curve.seed = opts.seed;

  for (std::int64_t j = 0; j < boundaries; ++j) {
    std::vector<std::int64_t>& bucket = buckets[static_cast<std::size_t>(j)];
    CoverageCheckpoint cp;
    cp.step = (j + 1) * opts.increment;
    cp.truncated = static_cast<std::int64_t>(bucket.size()) < opts.samples_per_increment;

    std::int64_t take = std::min<std::int64_t>(opts.samples_per_increment, static_cast<std::int64_t>(bucket.size()));
    if (take < static_cast<std::int64_t>(bucket.size())) {
      // partial Fisher-Yates on this increment's substream
      CounterRng rng = base.substream(static_cast<std::uint64_t>(j));
      for (std::int64_t t = 0; t < take; ++t) {
        const std::int64_t swap_with = t + static_cast<std::int64_t>(rng.below(
                                               static_cast<std::uint64_t>(bucket.size() - static_cast<std::size_t>(t))));
        std::swap(bucket[static_cast<std::size_t>(t)], bucket[static_cast<std::size_t>(swap_with)]);
      }
    }
    for (std::int64_t t = 0; t < take; ++t) {
      const std::span<const double> row = data.row(bucket[static_cast<std::size_t>(t)]);
      pool.insert(pool.end(), row.begin(), row.end());
    }

    cp.radius = pool.empty() ? 0.0 : min_enclosing_ball(pool, data.d).radius;
    curve.checkpoints.push_back(cp);
  }

  double auto_base = 0.0;
  for (const CoverageCheckpoint& cp : curve.checkpoints) auto_base = std::max(auto_base, cp.radius);
  curve.normalize_base = opts.normalize_base.value_or(auto_base);
  for (CoverageCheckpoint& cp : curve.checkpoints)
    cp.normalized = curve.normalize_base > 0.0 ? cp.radius / curve.normalize_base : 0.0;
  return curve;
}

} // namespace behent
