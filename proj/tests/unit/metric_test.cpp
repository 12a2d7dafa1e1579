#include <gtest/gtest.h>

#include <random>

#include "bclust/errors.hpp"
#include "bclust/metric.hpp"
#include "bclust/oracle.hpp"
#include "reference.hpp"

namespace bclust {
namespace {

TEST(PointSetTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(PointSet(0, {}), InputError);
  EXPECT_THROW(PointSet(2, {}), InputError);
  EXPECT_THROW(PointSet(2, {1.0, 2.0, 3.0}), InputError);
  EXPECT_THROW(PointSet(1, {std::nan("")}), InputError);
  EXPECT_THROW(PointSet(1, {1.0 / 0.0}), InputError);
  const PointSet p(2, {1, 2, 3, 4});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.dim(), 2u);
  EXPECT_DOUBLE_EQ(p[1][0], 3.0);
}

TEST(PointSetTest, FromRowsChecksWidth) {
  std::vector<std::vector<double>> rows{{1, 2}, {3}};
  EXPECT_THROW(PointSet::from_rows(rows), InputError);
  rows[1].push_back(4);
  EXPECT_EQ(PointSet::from_rows(rows).coordinates(), (std::vector<double>{1, 2, 3, 4}));
}

TEST(DistanceOracleTest, MatrixValidation) {
  EXPECT_THROW(DistanceOracle::matrix(2, {0, 1, 2, 0}), InputError);   // asymmetric
  EXPECT_THROW(DistanceOracle::matrix(2, {1, 1, 1, 0}), InputError);   // diagonal
  EXPECT_THROW(DistanceOracle::matrix(2, {0, -1, -1, 0}), InputError); // negative
  EXPECT_THROW(DistanceOracle::matrix(2, {0, 1, 1}), InputError);
  // Triangle inequality violations are accepted.
  const auto m = DistanceOracle::matrix(3, {0, 1, 10, 1, 0, 1, 10, 1, 0});
  EXPECT_DOUBLE_EQ(m.distance(0, 2), 10.0);
  EXPECT_DOUBLE_EQ(m.squared_distance(0, 2), 100.0);
  EXPECT_THROW(m.check_center(CenterRef{std::vector<double>{0.0}}), InputError);
}

TEST(DistanceOracleTest, CoordinateCentersNeedMatchingDimension) {
  const auto o = DistanceOracle::euclidean(PointSet(2, {0, 0, 3, 4}));
  EXPECT_DOUBLE_EQ(o.distance_to(1, CenterRef{std::vector<double>{0.0, 0.0}}), 5.0);
  EXPECT_DOUBLE_EQ(o.squared_distance_to(1, CenterRef{std::size_t{0}}), 25.0);
  const std::vector<CenterRef> flat{std::vector<double>{1.0}};
  EXPECT_THROW(evaluate_objective(BalancedAssignment({0, 0}, 1), flat, o, Objective::median),
               InputError);
  EXPECT_THROW(distance_table(o, flat), InputError);
  EXPECT_THROW(o.check_center(CenterRef{std::size_t{2}}), InputError);
}

TEST(DistanceOracleTest, CallbackSymmetric) {
  const auto o = DistanceOracle::callback(4, [](std::size_t i, std::size_t j) {
    return static_cast<double>(i > j ? i - j : j - i);
  });
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(o.distance(i, j), o.distance(j, i));
}

TEST(EvaluateObjectiveTest, SinglePointAtCenterIsZero) {
  const auto o = DistanceOracle::euclidean(PointSet(3, {0, 0, 0}));
  const BalancedAssignment a({0}, 1);
  const std::vector<CenterRef> centers{std::vector<double>{0, 0, 0}};
  for (auto obj : {Objective::center, Objective::median, Objective::means})
    EXPECT_EQ(evaluate_objective(a, centers, o, obj), 0.0);
}

TEST(EvaluateObjectiveTest, TightnessInstanceWithMidpointsHasRadiusOne) {
  const auto f = oracle::tightness_fixture(0.1);
  const auto o = DistanceOracle::euclidean(f.points);
  const BalancedAssignment a({0, 0, 1, 1, 2, 2}, 3);
  const std::vector<CenterRef> mids{std::vector<double>{1.0}, std::vector<double>{4.9},
                                    std::vector<double>{7.8}};
  EXPECT_NEAR(evaluate_objective(a, mids, o, Objective::center), 1.0, 1e-12);
}

TEST(EvaluateObjectiveTest, MatchesIndependentSummation) {
  std::mt19937_64 rng(11);
  const auto pts = testing::random_points(8, 3, rng);
  const auto o = DistanceOracle::euclidean(pts);
  const BalancedAssignment a({0, 1, 1, 0, 0, 1, 1, 0}, 2);
  const std::vector<CenterRef> centers{std::size_t{2}, std::vector<double>{5, 5, 5}};
  for (auto obj : {Objective::center, Objective::median, Objective::means}) {
    double acc = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      double s = 0;
      for (std::size_t t = 0; t < 3; ++t) {
        const double c = a.labels()[i] == 0 ? pts[2][t] : 5.0;
        s += (pts[i][t] - c) * (pts[i][t] - c);
      }
      const double d = std::sqrt(s);
      acc = obj == Objective::center ? std::max(acc, d) : acc + (obj == Objective::means ? s : d);
    }
    EXPECT_NEAR(evaluate_objective(a, centers, o, obj), acc, 1e-9 * std::max(1.0, acc));
  }
}

TEST(DistanceTableTest, DirectDistances) {
  const auto o = DistanceOracle::euclidean(PointSet(1, {0, 3}));
  const std::vector<CenterRef> centers{std::vector<double>{0.0}};
  const auto t = distance_table(o, centers);
  EXPECT_EQ(t.values(), (std::vector<double>{0, 3}));
}

// p4 = 6 - delta sits 4 - delta from p2, 2 - delta from p5 and 6 - delta from p1.
TEST(DistanceTableTest, TightnessRowForFourthPoint) {
  const auto f = oracle::tightness_fixture(0.1);
  const auto o = DistanceOracle::euclidean(f.points);
  const std::vector<CenterRef> centers{std::size_t{1}, std::size_t{4}, std::size_t{0}};
  const auto t = distance_table(o, centers);
  EXPECT_NEAR(t(3, 0), 3.9, 1e-12);
  EXPECT_NEAR(t(3, 1), 1.9, 1e-12);
  EXPECT_NEAR(t(3, 2), 5.9, 1e-12);
}

TEST(DistanceTableTest, MatchesPerPairNormsAndIsThreadInvariant) {
  std::mt19937_64 rng(5);
  const auto pts = testing::random_points(10, 4, rng);
  const auto o = DistanceOracle::euclidean(pts);
  std::vector<CenterRef> centers;
  for (std::size_t j = 0; j < 5; ++j) centers.emplace_back(std::size_t{j * 2});
  const auto t1 = distance_table(o, centers, 1);
  const auto t3 = distance_table(o, centers, 3);
  EXPECT_EQ(t1.values(), t3.values());
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0;
      for (std::size_t t = 0; t < 4; ++t) s += std::pow(pts[i][t] - pts[j * 2][t], 2);
      EXPECT_NEAR(t1(i, j), std::sqrt(s), 1e-12);
      EXPECT_EQ(t1(i, j), o.distance(j * 2, i));
    }
}

TEST(ExtremeDistancesTest, Examples) {
  const auto r = extreme_distances(DistanceTable(2, 2, {0, 2, 1, 3}));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->r_min, 1.0);
  EXPECT_EQ(r->r_max, 3.0);
  EXPECT_FALSE(extreme_distances(DistanceTable(1, 2, {0, 0})));
}

TEST(ExtremeDistancesTest, TightnessTableByScan) {
  const auto f = oracle::tightness_fixture(0.1);
  const auto o = DistanceOracle::euclidean(f.points);
  const std::vector<CenterRef> centers{std::size_t{1}, std::size_t{4}, std::size_t{0}};
  const auto t = distance_table(o, centers);
  double lo = 1e300, hi = 0;
  for (double v : t.values()) {
    if (v > 0) lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto r = extreme_distances(t);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->r_min, 1.9, 1e-12);
  EXPECT_EQ(r->r_min, lo);
  EXPECT_EQ(r->r_max, hi);
}

TEST(BalanceBoundsTest, ChainValidation) {
  EXPECT_NO_THROW((BalanceBounds{2, 3}.validate(7, 3)));
  EXPECT_THROW((BalanceBounds{1, 1}.validate(3, 0)), InputError);
  EXPECT_THROW((BalanceBounds{1, 1}.validate(3, 4)), InputError);
  EXPECT_THROW((BalanceBounds{0, 3}.validate(6, 2)), InfeasibleBoundsError);
  EXPECT_THROW((BalanceBounds{4, 4}.validate(6, 2)), InfeasibleBoundsError);
  EXPECT_THROW((BalanceBounds{2, 2}.validate(7, 3)), InfeasibleBoundsError);
  EXPECT_THROW((BalanceBounds{1, 8}.validate(7, 3)), InfeasibleBoundsError);
}

TEST(BalancedAssignmentTest, SizesAndBounds) {
  const BalancedAssignment a({0, 1, 1, 2, 2, 2}, 3);
  EXPECT_EQ(a.sizes(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_TRUE(a.within({1, 3}));
  EXPECT_FALSE(a.within({2, 3}));
  EXPECT_THROW(a.check_within({2, 3}), InvariantError);
  EXPECT_THROW(BalancedAssignment({0, 3}, 3), InvariantError);
  const auto rr = BalancedAssignment::round_robin(7, 3);
  EXPECT_EQ(rr.sizes(), (std::vector<std::size_t>{3, 2, 2}));
}

TEST(ObjectiveTest, ParseRoundTrip) {
  for (auto obj : {Objective::center, Objective::median, Objective::means})
    EXPECT_EQ(parse_objective(to_string(obj)), obj);
  EXPECT_THROW(parse_objective("mean"), InputError);
}

}  // namespace
}  // namespace bclust
