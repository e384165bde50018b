#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "behent/study.hpp"

using behent::convergence_study;
using behent::DistributionSpec;
using behent::EstimatorSpec;
using behent::Error;
using behent::KSchedule;
using behent::MixtureComponent;
using behent::StudyReport;
using Catch::Matchers::WithinAbs;

TEST_CASE("k schedule rounds n to the exponent up", "[study]") {
  KSchedule sched;
  CHECK(sched.k_for(10000) == 100);
  CHECK(sched.k_for(200) == 15); // ceil(sqrt(200)) = 15
  CHECK(sched.k_for(4) == 2);
  KSchedule third{1.0 / 3.0};
  CHECK(third.k_for(1000) == 10);
}

TEST_CASE("k schedule exponent must sit strictly inside the unit interval", "[study]") {
  CHECK_THROWS_AS(KSchedule{0.0}.validate(), Error);
  CHECK_THROWS_AS(KSchedule{1.0}.validate(), Error);
  CHECK_THROWS_AS(KSchedule{-0.5}.validate(), Error);
  CHECK_NOTHROW(KSchedule{0.99}.validate());
}

TEST_CASE("a small study produces the right shape and a zero oracle gap", "[study]") {
  auto family = DistributionSpec::uniform_box({0.0}, {1.0}, 1);
  StudyReport rep = convergence_study(family, EstimatorSpec::shannon(), {200, 400, 800}, KSchedule{}, 5, 7);
  REQUIRE(rep.cells.size() == 3);
  CHECK(rep.cells[0].n == 200);
  CHECK(rep.cells[0].k == 15);
  CHECK(rep.cells[1].k == 20);
  CHECK(rep.cells[2].k == 29);
  CHECK(rep.repetitions == 5);
  CHECK_THAT(rep.oracle, WithinAbs(0.0, 1e-14)); // log volume of the unit box
  for (const auto& cell : rep.cells) {
    CHECK(cell.variance > 0.0);
    CHECK(cell.mae >= 0.0);
    CHECK(std::isfinite(cell.mean));
  }
  CHECK(std::isfinite(rep.variance_slope));
}

TEST_CASE("studies are reproducible bit for bit", "[study]") {
  auto family = DistributionSpec::uniform_box({0.0}, {2.0}, 1);
  auto est = EstimatorSpec::be_corrected(behent::conditioned_params(0.5, 64));
  StudyReport a = convergence_study(family, est, {200, 400}, KSchedule{}, 5, 11);
  StudyReport b = convergence_study(family, est, {200, 400}, KSchedule{}, 5, 11);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].mean == b.cells[i].mean);
    CHECK(a.cells[i].mae == b.cells[i].mae);
    CHECK(a.cells[i].variance == b.cells[i].variance);
  }
  CHECK(a.variance_slope == b.variance_slope);
}

TEST_CASE("the study seed overrides the family seed", "[study]") {
  auto f1 = DistributionSpec::uniform_box({0.0}, {1.0}, 1);
  auto f2 = DistributionSpec::uniform_box({0.0}, {1.0}, 2);
  StudyReport a = convergence_study(f1, EstimatorSpec::shannon(), {200, 400}, KSchedule{}, 5, 9);
  StudyReport b = convergence_study(f2, EstimatorSpec::shannon(), {200, 400}, KSchedule{}, 5, 9);
  CHECK(a.cells[0].mean == b.cells[0].mean);
}

TEST_CASE("study validation rejects malformed requests", "[study]") {
  auto family = DistributionSpec::uniform_box({0.0}, {1.0}, 1);
  auto shannon = EstimatorSpec::shannon();
  CHECK_THROWS_AS(convergence_study(family, shannon, {}, KSchedule{}, 5, 0), Error);
  CHECK_THROWS_AS(convergence_study(family, shannon, {400, 200}, KSchedule{}, 5, 0), Error);
  CHECK_THROWS_AS(convergence_study(family, shannon, {200, 200}, KSchedule{}, 5, 0), Error);
  CHECK_THROWS_AS(convergence_study(family, shannon, {2}, KSchedule{}, 5, 0), Error);
  CHECK_THROWS_AS(convergence_study(family, shannon, {200}, KSchedule{}, 4, 0), Error);
  auto mixture = DistributionSpec::gaussian_mixture(1, {MixtureComponent{1.0, {0.0}, 1.0}}, 1);
  CHECK_THROWS_AS(convergence_study(mixture, shannon, {200}, KSchedule{}, 5, 0), Error);
}
