#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "behent/rng.hpp"

using behent::CounterRng;
using Catch::Matchers::WithinAbs;

TEST_CASE("same seed and stream reproduce the same sequence", "[rng]") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and different streams decorrelate", "[rng]") {
  CounterRng a(1), b(2);
  CHECK(a.next_u64() != b.next_u64());
  CounterRng base(7);
  CounterRng s1 = base.substream(1), s2 = base.substream(2);
  CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("substreams are stateless functions of the parent seed", "[rng]") {
  CounterRng base(99);
  base.next_u64();
  base.next_u64();
  CounterRng fresh(99);
  CHECK(base.substream(5).next_u64() == fresh.substream(5).next_u64());
}

TEST_CASE("uniform01 lies in the half-open unit interval", "[rng]") {
  CounterRng rng(3);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform draws pass a KS test at the 1 percent level", "[rng]") {
  CounterRng rng(11);
  const int n = 10000;
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.uniform01();
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    double lo = static_cast<double>(i) / n, hi = static_cast<double>(i + 1) / n;
    ks = std::max(ks, std::max(std::fabs(xs[i] - lo), std::fabs(xs[i] - hi)));
  }
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bounded draws stay in range and are roughly uniform", "[rng]") {
  CounterRng rng(17);
  const std::uint64_t bound = 10;
  std::vector<int> counts(bound, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t v = rng.below(bound);
    REQUIRE(v < bound);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(c > n / 10 - 600);
    CHECK(c < n / 10 + 600);
  }
}

TEST_CASE("normal draws have unit moments", "[rng]") {
  CounterRng rng(23);
  const int n = 100000;
  double m = 0.0;
  std::vector<double> xs(n);
  for (auto& x : xs) {
    x = rng.normal();
    m += x;
  }
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= (n - 1);
  CHECK_THAT(m, WithinAbs(0.0, 0.02));
  CHECK_THAT(v, WithinAbs(1.0, 0.05));
}

TEST_CASE("scaled normal applies mean and sigma", "[rng]") {
  CounterRng a(5), b(5);
  double x = a.normal();
  CHECK_THAT(b.normal(3.0, 2.0), WithinAbs(3.0 + 2.0 * x, 1e-15));
}
