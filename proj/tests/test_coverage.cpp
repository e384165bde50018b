#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "behent/coverage.hpp"
#include "behent/rng.hpp"
#include "support.hpp"

using behent::CoverageCurve;
using behent::CoverageOptions;
using behent::CounterRng;
using behent::coverage_curve;
using behent::Dataset;
using behent::Error;
using behent::min_enclosing_ball;
using behent::MinBall;
using Catch::Matchers::WithinAbs;

namespace {

// Independent reference: enumerate every subset of size 1..d+1, solve its
// circumball by Cramer's rule, and keep the smallest candidate that encloses
// all points. Only valid for small m.
struct BruteBall {
  std::vector<double> center;
  double radius = 0.0;
};

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const double m[9]) {
  return m[0] * det2(m[4], m[5], m[7], m[8]) - m[1] * det2(m[3], m[5], m[6], m[8]) +
         m[2] * det2(m[3], m[4], m[6], m[7]);
}

std::optional<BruteBall> circumball(const std::vector<const double*>& pts, int d) {
  const int s = static_cast<int>(pts.size());
  BruteBall ball;
  ball.center.assign(pts[0], pts[0] + d);
  if (s == 1) return ball;
  const int m = s - 1;
  double g[9] = {0}, h[3] = {0};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double dot = 0.0;
      for (int c = 0; c < d; ++c) dot += (pts[i + 1][c] - pts[0][c]) * (pts[j + 1][c] - pts[0][c]);
      g[i * m + j] = 2.0 * dot;
    }
    for (int c = 0; c < d; ++c) h[i] += (pts[i + 1][c] - pts[0][c]) * (pts[i + 1][c] - pts[0][c]);
  }
  double coef[3] = {0};
  if (m == 1) {
    if (std::fabs(g[0]) < 1e-12) return std::nullopt;
    coef[0] = h[0] / g[0];
  } else if (m == 2) {
    const double den = det2(g[0], g[1], g[2], g[3]);
    if (std::fabs(den) < 1e-12) return std::nullopt;
    coef[0] = det2(h[0], g[1], h[1], g[3]) / den;
    coef[1] = det2(g[0], h[0], g[2], h[1]) / den;
  } else {
    const double den = det3(g);
    if (std::fabs(den) < 1e-12) return std::nullopt;
    for (int i = 0; i < 3; ++i) {
      double rep[9];
      std::copy(g, g + 9, rep);
      for (int r = 0; r < 3; ++r) rep[r * 3 + i] = h[r];
      coef[i] = det3(rep) / den;
    }
  }
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < d; ++c) ball.center[static_cast<std::size_t>(c)] += coef[i] * (pts[i + 1][c] - pts[0][c]);
  double r2 = 0.0;
  for (int c = 0; c < d; ++c) {
    const double diff = ball.center[static_cast<std::size_t>(c)] - pts[0][c];
    r2 += diff * diff;
  }
  ball.radius = std::sqrt(r2);
  return ball;
}

BruteBall brute_min_ball(const std::vector<double>& flat, int d) {
  const int n = static_cast<int>(flat.size()) / d;
  std::optional<BruteBall> best;
  std::vector<int> pick;
  auto contains_all = [&](const BruteBall& b) {
    for (int i = 0; i < n; ++i) {
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double diff = flat[static_cast<std::size_t>(i * d + c)] - b.center[static_cast<std::size_t>(c)];
        r2 += diff * diff;
      }
      if (std::sqrt(r2) > b.radius + 1e-9 * std::max(1.0, b.radius)) return false;
    }
    return true;
  };
  auto consider = [&]() {
    std::vector<const double*> pts;
    for (int i : pick) pts.push_back(flat.data() + static_cast<std::size_t>(i) * d);
    auto ball = circumball(pts, d);
    if (!ball || !contains_all(*ball)) return;
    if (!best || ball->radius < best->radius) best = *ball;
  };
  auto rec = [&](auto&& self, int from, int want) -> void {
    if (want == 0) {
      consider();
      return;
    }
    for (int i = from; i <= n - want; ++i) {
      pick.push_back(i);
      self(self, i + 1, want - 1);
      pick.pop_back();
    }
  };
  for (int s = 1; s <= d + 1 && s <= n; ++s) rec(rec, 0, s);
  REQUIRE(best.has_value());
  return *best;
}

} // namespace

TEST_CASE("two points give the midpoint ball", "[coverage]") {
  std::vector<double> pts{0.0, 0.0, 2.0, 0.0};
  MinBall ball = min_enclosing_ball(pts, 2);
  CHECK_THAT(ball.center[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(ball.center[1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(ball.radius, WithinAbs(1.0, 1e-12));
}

TEST_CASE("a right triangle is enclosed by its hypotenuse circle", "[coverage]") {
  std::vector<double> pts{0.0, 0.0, 2.0, 0.0, 0.0, 2.0};
  MinBall ball = min_enclosing_ball(pts, 2);
  CHECK_THAT(ball.center[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(ball.center[1], WithinAbs(1.0, 1e-12));
  CHECK_THAT(ball.radius, WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK(ball.support.size() == 2); // the two hypotenuse endpoints suffice
}

TEST_CASE("degenerate point sets collapse to tiny balls", "[coverage]") {
  std::vector<double> same;
  for (int i = 0; i < 5; ++i) {
    same.push_back(1.0);
    same.push_back(1.0);
  }
  MinBall dup = min_enclosing_ball(same, 2);
  CHECK(dup.radius == 0.0);
  CHECK_THAT(dup.center[0], WithinAbs(1.0, 1e-15));

  std::vector<double> line{0.0, 1.0, 2.0, 3.0};
  MinBall onedim = min_enclosing_ball(line, 1);
  CHECK_THAT(onedim.center[0], WithinAbs(1.5, 1e-12));
  CHECK_THAT(onedim.radius, WithinAbs(1.5, 1e-12));

  std::vector<double> collinear{0.0, 0.0, 1.0, 1.0, 3.0, 3.0};
  MinBall diag = min_enclosing_ball(collinear, 2);
  CHECK_THAT(diag.radius, WithinAbs(1.5 * std::sqrt(2.0), 1e-9));
}

TEST_CASE("cocircular points recover their circle", "[coverage]") {
  std::vector<double> pts{7.0, 5.0, 3.0, 5.0, 5.0, 7.0, 5.0, 3.0};
  MinBall ball = min_enclosing_ball(pts, 2);
  CHECK_THAT(ball.center[0], WithinAbs(5.0, 1e-9));
  CHECK_THAT(ball.center[1], WithinAbs(5.0, 1e-9));
  CHECK_THAT(ball.radius, WithinAbs(2.0, 1e-9));
}

TEST_CASE("the ball is a certificate: all points inside, support on the boundary", "[coverage]") {
  CounterRng rng(606);
  std::vector<double> pts(50 * 3);
  for (auto& x : pts) x = rng.uniform(-1.0, 1.0);
  MinBall ball = min_enclosing_ball(pts, 3);
  REQUIRE(ball.support.size() <= 4);
  REQUIRE(!ball.support.empty());
  for (int i = 0; i < 50; ++i) {
    double r2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double diff = pts[static_cast<std::size_t>(i * 3 + c)] - ball.center[static_cast<std::size_t>(c)];
      r2 += diff * diff;
    }
    CHECK(std::sqrt(r2) <= ball.radius + 1e-9);
  }
  for (std::int64_t idx : ball.support) {
    double r2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double diff = pts[static_cast<std::size_t>(idx * 3 + c)] - ball.center[static_cast<std::size_t>(c)];
      r2 += diff * diff;
    }
    CHECK_THAT(std::sqrt(r2), WithinAbs(ball.radius, 1e-9));
  }
}

TEST_CASE("the minimal ball does not depend on point order", "[coverage]") {
  CounterRng rng(607);
  std::vector<double> pts(50 * 3);
  for (auto& x : pts) x = rng.uniform(-1.0, 1.0);
  MinBall ref = min_enclosing_ball(pts, 3);
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    auto sub = rng.substream(shuffle + 1);
    std::vector<double> perm = pts;
    for (int i = 49; i > 0; --i) {
      const int j = static_cast<int>(sub.below(static_cast<std::uint64_t>(i + 1)));
      for (int c = 0; c < 3; ++c) std::swap(perm[static_cast<std::size_t>(i * 3 + c)], perm[static_cast<std::size_t>(j * 3 + c)]);
    }
    MinBall got = min_enclosing_ball(perm, 3);
    CHECK_THAT(got.radius, WithinAbs(ref.radius, 1e-9));
    for (int c = 0; c < 3; ++c) CHECK_THAT(got.center[static_cast<std::size_t>(c)], WithinAbs(ref.center[static_cast<std::size_t>(c)], 1e-9));
  }
}

TEST_CASE("welzl agrees with subset enumeration on random instances", "[coverage]") {
  CounterRng rng(608);
  for (int rep = 0; rep < 30; ++rep) {
    auto sub = rng.substream(rep + 1);
    const int d = 1 + static_cast<int>(sub.below(3));
    const int m = 1 + static_cast<int>(sub.below(12));
    if (m < 2) continue;
    std::vector<double> pts(static_cast<std::size_t>(m) * d);
    for (auto& x : pts) x = sub.uniform(0.0, 1.0);
    MinBall fast = min_enclosing_ball(pts, d);
    BruteBall slow = brute_min_ball(pts, d);
    CHECK_THAT(fast.radius, WithinAbs(slow.radius, 1e-9));
  }
}

TEST_CASE("enclosing ball input validation", "[coverage]") {
  std::vector<double> pts{0.0, 1.0, 2.0};
  CHECK_THROWS_AS(min_enclosing_ball(pts, 2), Error); // 3 values, d=2
  CHECK_THROWS_AS(min_enclosing_ball(pts, 0), Error);
  CHECK_THROWS_AS(min_enclosing_ball(pts, 33), Error);
  CHECK_THROWS_AS(min_enclosing_ball(std::vector<double>{}, 2), Error);
  std::vector<double> bad{0.0, std::nan("")};
  CHECK_THROWS_AS(min_enclosing_ball(bad, 1), Error);
}

namespace {
Dataset staircase_dataset() {
  // Steps 1..60; the point at step s sits at (s, 0), so the pool radius grows
  // linearly with the largest step seen.
  Dataset ds;
  ds.d = 2;
  ds.n = 60;
  for (int s = 1; s <= 60; ++s) {
    ds.points.push_back(static_cast<double>(s));
    ds.points.push_back(0.0);
    ds.steps.push_back(s);
  }
  ds.validate();
  return ds;
}
} // namespace

TEST_CASE("coverage checkpoints land on increment boundaries and grow", "[coverage]") {
  Dataset ds = staircase_dataset();
  CoverageOptions opts;
  opts.increment = 20;
  opts.samples_per_increment = 20;
  CoverageCurve curve = coverage_curve(ds, opts);
  REQUIRE(curve.checkpoints.size() == 3);
  CHECK(curve.checkpoints[0].step == 20);
  CHECK(curve.checkpoints[1].step == 40);
  CHECK(curve.checkpoints[2].step == 60);
  for (const auto& cp : curve.checkpoints) CHECK(!cp.truncated);
  CHECK(curve.checkpoints[0].radius < curve.checkpoints[1].radius);
  CHECK(curve.checkpoints[1].radius < curve.checkpoints[2].radius);
  // Pool after all rows: points 1..60 on a segment of length 59.
  CHECK_THAT(curve.checkpoints[2].radius, WithinAbs(29.5, 1e-9));
  CHECK_THAT(curve.checkpoints[2].normalized, WithinAbs(1.0, 1e-12));
}

TEST_CASE("a dataset confined to a fixed ball has a flat curve", "[coverage]") {
  Dataset ds;
  ds.d = 2;
  const double corners[4][2] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  for (int s = 1; s <= 40; ++s) {
    ds.points.push_back(corners[s % 4][0]);
    ds.points.push_back(corners[s % 4][1]);
    ds.steps.push_back(s);
  }
  ds.n = 40;
  ds.validate();
  CoverageOptions opts;
  opts.increment = 10;
  opts.samples_per_increment = 10; // take every row, no subsampling
  CoverageCurve curve = coverage_curve(ds, opts);
  REQUIRE(curve.checkpoints.size() == 4);
  const double expected = std::sqrt(0.5);
  for (const auto& cp : curve.checkpoints) {
    CHECK_THAT(cp.radius, WithinAbs(expected, 1e-9));
    CHECK(!cp.truncated);
  }
}

TEST_CASE("short increments are flagged as truncated, empty ones carry forward", "[coverage]") {
  Dataset ds;
  ds.d = 1;
  // Steps 1..10 then 41..50: increments 2 and 3 (11-20, 21-30) are empty,
  // increment 4 (31-40) is empty too, then 41-50 fills the last one.
  for (int s = 1; s <= 10; ++s) {
    ds.points.push_back(static_cast<double>(s));
    ds.steps.push_back(s);
  }
  for (int s = 41; s <= 50; ++s) {
    ds.points.push_back(static_cast<double>(s));
    ds.steps.push_back(s);
  }
  ds.n = 20;
  ds.validate();
  CoverageOptions opts;
  opts.increment = 10;
  opts.samples_per_increment = 15; // more than any increment holds
  CoverageCurve curve = coverage_curve(ds, opts);
  REQUIRE(curve.checkpoints.size() == 5);
  CHECK(curve.checkpoints[0].truncated); // only 10 rows available
  CHECK(curve.checkpoints[1].truncated); // empty
  CHECK(curve.checkpoints[2].truncated);
  CHECK(curve.checkpoints[3].truncated);
  CHECK(curve.checkpoints[4].truncated);
  CHECK(curve.checkpoints[1].radius == curve.checkpoints[0].radius); // nothing added
  CHECK(curve.checkpoints[4].radius > curve.checkpoints[3].radius);
}

TEST_CASE("coverage subsampling is seeded and reproducible", "[coverage]") {
  CounterRng rng(609);
  Dataset ds;
  ds.d = 2;
  ds.n = 400;
  for (int i = 0; i < 400; ++i) {
    ds.points.push_back(rng.uniform(-1.0, 1.0));
    ds.points.push_back(rng.uniform(-1.0, 1.0));
    ds.steps.push_back(i + 1);
  }
  ds.validate();
  CoverageOptions opts;
  opts.increment = 100;
  opts.samples_per_increment = 25; // forces subsampling
  opts.seed = 5;
  CoverageCurve a = coverage_curve(ds, opts);
  CoverageCurve b = coverage_curve(ds, opts);
  REQUIRE(a.checkpoints.size() == b.checkpoints.size());
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
    CHECK(a.checkpoints[i].radius == b.checkpoints[i].radius);
  opts.seed = 6;
  CoverageCurve c = coverage_curve(ds, opts);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
    any_differs = any_differs || a.checkpoints[i].radius != c.checkpoints[i].radius;
  CHECK(any_differs);
}

TEST_CASE("coverage normalization uses the supplied base", "[coverage]") {
  Dataset ds = staircase_dataset();
  CoverageOptions opts;
  opts.increment = 20;
  opts.samples_per_increment = 20;
  opts.normalize_base = 59.0;
  CoverageCurve curve = coverage_curve(ds, opts);
  CHECK_THAT(curve.checkpoints[2].normalized, WithinAbs(29.5 / 59.0, 1e-12));
  opts.normalize_base = -1.0;
  CHECK_THROWS_AS(coverage_curve(ds, opts), Error);
}

TEST_CASE("coverage needs step indices from the data or the row order", "[coverage]") {
  Dataset ds = Dataset::from_points({0.0, 1.0, 2.0, 3.0}, 1);
  CHECK_THROWS_AS(coverage_curve(ds, {}), Error);
  CoverageOptions opts;
  opts.steps_from_index = true;
  opts.increment = 2;
  opts.samples_per_increment = 2;
  CoverageCurve curve = coverage_curve(ds, opts);
  REQUIRE(curve.checkpoints.size() == 2);
  CHECK(curve.checkpoints[0].step == 2);
  CHECK(curve.checkpoints[1].step == 4);
  CHECK_THAT(curve.checkpoints[1].radius, WithinAbs(1.5, 1e-12));
}

TEST_CASE("coverage option validation", "[coverage]") {
  Dataset ds = staircase_dataset();
  CoverageOptions opts;
  opts.increment = 0;
  CHECK_THROWS_AS(coverage_curve(ds, opts), Error);
  opts.increment = 10;
  opts.samples_per_increment = 0;
  CHECK_THROWS_AS(coverage_curve(ds, opts), Error);
}
