#include <gtest/gtest.h>

#include <random>

#include "bclust/errors.hpp"
#include "bclust/kcenter.hpp"
#include "bclust/oracle.hpp"
#include "reference.hpp"

namespace bclust::oracle {
namespace {

TEST(ExactAssignmentTest, SingleCenter) {
  const DistanceTable t(3, 1, {1, 2, 4});
  const auto a = exact_balanced_assignment(t, {3, 3}, Objective::median);
  EXPECT_EQ(a.cost, 7.0);
  EXPECT_EQ(a.assignment.labels(), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(ExactAssignmentTest, MatchesExhaustiveLabels) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 7, k = 2;
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> v(n * k);
    for (double& x : v) x = u(rng);
    const DistanceTable t(n, k, v);
    const auto bounds = testing::random_bounds(n, k, rng);
    for (auto obj : {Objective::center, Objective::median, Objective::means}) {
      const auto want = testing::exhaustive_labels(t, bounds, obj);
      const auto got = exact_balanced_assignment(t, bounds, obj);
      EXPECT_NEAR(got.cost, want.cost, 1e-9) << "trial " << trial;
      EXPECT_TRUE(got.assignment.within(bounds));
    }
  }
}

TEST(ExactAssignmentTest, TightnessPointCenters) {
  const auto f = tightness_fixture(0.1);
  const auto o = DistanceOracle::euclidean(f.points);
  const std::vector<CenterRef> c{std::size_t{0}, std::size_t{2}, std::size_t{4}};
  const auto a = exact_balanced_assignment(distance_table(o, c), f.bounds, Objective::center);
  // Point centers sit at one end of each width-2 pair: twice r_opt.
  EXPECT_NEAR(a.cost, 2.0, 1e-12);
  EXPECT_EQ(a.assignment.labels(), (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
}

TEST(BruteForceTest, TightnessOptimum) {
  const auto f = tightness_fixture(0.1);
  const auto best = brute_force_optimum(DistanceOracle::euclidean(f.points), f.k, f.bounds,
                                        Objective::center, CenterMode::continuous);
  EXPECT_NEAR(best.cost, 1.0, 1e-12);
  EXPECT_EQ(best.assignment.labels(), (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
}

TEST(BruteForceTest, SeedSetOptimum) {
  const auto f = seed_set_fixture(1, 1, 100);
  const auto best = brute_force_optimum(DistanceOracle::euclidean(f.points), f.k, f.bounds,
                                        Objective::center, CenterMode::continuous);
  EXPECT_NEAR(best.cost, 1.0, 1e-12);
  const auto& lab = best.assignment.labels();
  EXPECT_EQ(lab[4], lab[5]);
  EXPECT_NE(lab[0], lab[4]);
}

TEST(BruteForceTest, CoincidentPairsMeans) {
  const auto o = DistanceOracle::euclidean(PointSet(2, {0, 0, 5, 5, 0, 0, 5, 5}));
  for (auto mode : {CenterMode::discrete, CenterMode::continuous})
    EXPECT_EQ(brute_force_optimum(o, 2, {2, 2}, Objective::means, mode).cost, 0.0);
}

TEST(BruteForceTest, DiscreteAgreesWithCenterTupleEnumeration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 7, k = 2;
    const auto o = DistanceOracle::euclidean(testing::random_points(n, 2, rng));
    const auto bounds = testing::random_bounds(n, k, rng);
    for (auto obj : {Objective::center, Objective::median, Objective::means}) {
      double want = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          const std::vector<CenterRef> c{a, b};
          want = std::min(want, exact_balanced_assignment(distance_table(o, c), bounds, obj).cost);
        }
      const auto got = brute_force_optimum(o, k, bounds, obj, CenterMode::discrete);
      EXPECT_NEAR(got.cost, want, 1e-9 * std::max(1.0, want));
      EXPECT_NEAR(evaluate_objective(got.assignment, got.centers, o, obj), got.cost,
                  1e-9 * std::max(1.0, want));
    }
  }
}

TEST(BruteForceTest, ContinuousNeverExceedsDiscrete) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 8, k = 2;
    const auto o = DistanceOracle::euclidean(testing::random_points(n, 3, rng));
    const auto bounds = testing::random_bounds(n, k, rng);
    for (auto obj : {Objective::center, Objective::means}) {
      const double cont = brute_force_optimum(o, k, bounds, obj, CenterMode::continuous).cost;
      const double disc = brute_force_optimum(o, k, bounds, obj, CenterMode::discrete).cost;
      EXPECT_LE(cont, disc * (1 + 1e-9));
    }
  }
}

TEST(BruteForceTest, SizeGuardAndModes) {
  std::mt19937_64 rng(1);
  const auto big = DistanceOracle::euclidean(testing::random_points(17, 2, rng));
  EXPECT_THROW(brute_force_optimum(big, 2, {8, 9}, Objective::center, CenterMode::discrete),
               InputError);
  const auto m = DistanceOracle::matrix(2, {0, 1, 1, 0});
  EXPECT_THROW(brute_force_optimum(m, 1, {2, 2}, Objective::center, CenterMode::continuous),
               InputError);
}

TEST(MinimumBallTest, EquilateralTriangle) {
  const PointSet p(2, {0, 0, 2, 0, 1, std::sqrt(3.0)});
  const auto ball = minimum_enclosing_ball(p, {0, 1, 2});
  EXPECT_NEAR(ball.radius, 2 / std::sqrt(3.0), 1e-12);
  const PointSet obtuse(2, {0, 0, 4, 0, 2, 0.5});
  EXPECT_NEAR(minimum_enclosing_ball(obtuse, {0, 1, 2}).radius, 2.0, 1e-12);
}

TEST(FixtureTest, TightnessGeometry) {
  const double d = 0.1;
  const auto f = tightness_fixture(d);
  const auto o = DistanceOracle::euclidean(f.points);
  EXPECT_NEAR(o.distance(0, 1), 2, 1e-12);
  EXPECT_NEAR(o.distance(2, 3), 2, 1e-12);
  EXPECT_NEAR(o.distance(1, 2), 2 - d, 1e-12);
  EXPECT_NEAR(o.distance(3, 4), 2 - d, 1e-12);
  EXPECT_EQ(o.distance(4, 5), 0.0);
  EXPECT_EQ(f.k, 3u);
  EXPECT_EQ(f.first_index, 1u);
  EXPECT_THROW(tightness_fixture(0), InputError);
  EXPECT_THROW(tightness_fixture(1), InputError);
}

TEST(FixtureTest, SeedSetGeometry) {
  const double l = 1, r = 1, h = 100;
  const auto f = seed_set_fixture(l, r, h);
  const auto o = DistanceOracle::euclidean(f.points);
  EXPECT_EQ(o.distance(0, 1), 0.0);
  EXPECT_EQ(o.distance(2, 3), 0.0);
  EXPECT_EQ(o.distance(0, 2), l);
  EXPECT_EQ(o.distance(4, 5), 2 * r);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 4; j < 6; ++j) EXPECT_GE(o.distance(i, j), h);
  EXPECT_THROW(seed_set_fixture(2, 1, 100), InputError);
  EXPECT_THROW(seed_set_fixture(1, 1, 1.5), InputError);
}

TEST(FixtureTest, PlantedOptimumIsZero) {
  const auto f = planted_fixture(3, 2);
  for (auto obj : {Objective::center, Objective::median, Objective::means})
    EXPECT_EQ(brute_force_optimum(DistanceOracle::euclidean(f.points), f.k, f.bounds, obj,
                                  CenterMode::discrete)
                  .cost,
              0.0);
  EXPECT_EQ(fixtures().size(), 3u);
}

}  // namespace
}  // namespace bclust::oracle
