#include <gtest/gtest.h>

#include <random>

#include "bclust/errors.hpp"
#include "bclust/flow.hpp"
#include "bclust/oracle.hpp"
#include "bclust/regions.hpp"
#include "reference.hpp"

namespace bclust {
namespace {

FlowNetwork two_cluster(std::vector<std::int64_t> supplies, std::int64_t lower,
                        std::int64_t upper, std::vector<FlowEdge> edges) {
  FlowNetwork net;
  net.supplies = std::move(supplies);
  net.clusters = 2;
  net.lower = lower;
  net.upper = upper;
  net.edges = std::move(edges);
  return net;
}

TEST(ReductionTest, SingleClusterSinglePath) {
  FlowNetwork net;
  net.supplies = {5};
  net.clusters = 1;
  net.lower = net.upper = 5;
  net.edges = {{0, 0, 0}};
  const auto inst = reduce_demands_to_capacities(net);
  EXPECT_EQ(solve_max_flow(inst).value, 5);
  EXPECT_EQ(inst.required, 5);
}

TEST(ReductionTest, NoLowerBoundsIsPlainBipartite) {
  const auto net = two_cluster({2, 1}, 0, 3, {{0, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  const auto inst = reduce_demands_to_capacities(net);
  const auto f = solve_max_flow(inst);
  EXPECT_EQ(f.value, 3);
  const auto sol = max_flow(net);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->total, 3);
}

TEST(MaxFlowTest, ForcedAssignment) {
  const auto net = two_cluster({2, 2}, 2, 2, {{0, 0, 0}, {1, 1, 0}});
  const auto sol = max_flow(net);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->flows, (std::vector<double>{2, 2}));
}

TEST(MaxFlowTest, UnreachableDemand) {
  const auto net = two_cluster({3}, 1, 2, {{0, 0, 0}});
  EXPECT_FALSE(max_flow(net));
}

TEST(MaxFlowTest, VerdictMatchesEnumerationOnRandomNetworks) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> regions(1, 7), clusters(1, 3);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 300; ++trial) {
    FlowNetwork net = testing::random_network(regions(rng), clusters(rng), rng, false);
    // Drop random edges, keeping at least one per region.
    std::vector<FlowEdge> kept;
    for (std::size_t r = 0; r < net.supplies.size(); ++r) {
      bool any = false;
      for (const auto& e : net.edges)
        if (e.region == r && (coin(rng) || (!any && e.cluster + 1 == net.clusters))) {
          kept.push_back({e.region, e.cluster, 0});
          any = true;
        }
    }
    net.edges = kept;
    const bool expect = testing::enumerate_integral_flows(net).has_value();
    const auto sol = max_flow(net);
    EXPECT_EQ(sol.has_value(), expect) << "trial " << trial;
    if (sol) EXPECT_TRUE(is_integral(*sol));
  }
}

TEST(MaxFlowTest, VerdictMatchesPointwiseOracleOnCoverageInstances) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 10, k = 1 + trial % 3;
    const auto o = DistanceOracle::euclidean(testing::random_points(n, 2, rng));
    std::vector<CenterRef> centers;
    for (std::size_t j = 0; j < k; ++j) centers.emplace_back(std::size_t{j});
    const auto table = distance_table(o, centers);
    const auto bounds = testing::random_bounds(n, k, rng);
    const double r = table.values()[rng() % table.values().size()];
    const bool expect = oracle::bipartite_feasible(table, r, bounds);
    const auto regions = build_coverage_regions(table, r);
    bool got = false;
    if (regions) got = max_flow(coverage_network(*regions, k, bounds)).has_value();
    EXPECT_EQ(got, expect) << "trial " << trial;
  }
}

TEST(MinCostFlowTest, SymmetricSplit) {
  const auto net = two_cluster({2}, 1, 1, {{0, 0, 1.5}, {0, 1, 1.5}});
  const auto sol = min_cost_max_flow(net);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->flows, (std::vector<double>{1, 1}));
  EXPECT_DOUBLE_EQ(sol->cost, 3.0);
}

TEST(MinCostFlowTest, Dominance) {
  const auto net = two_cluster({2}, 0, 2, {{0, 0, 1}, {0, 1, 10}});
  const auto sol = min_cost_max_flow(net);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->flows, (std::vector<double>{2, 0}));
  EXPECT_DOUBLE_EQ(sol->cost, 2.0);
}

TEST(MinCostFlowTest, OptimalAgainstExhaustiveSplitsOnLevelInstances) {
  std::mt19937_64 rng(99);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 4 + trial % 7, k = 1 + trial % 3;
    if (k > n) continue;
    const auto o = DistanceOracle::euclidean(testing::random_points(n, 2, rng));
    std::vector<CenterRef> centers;
    for (std::size_t j = 0; j < k; ++j) centers.emplace_back(std::size_t{(j * 3) % n});
    const auto table = distance_table(o, centers);
    const auto range = extreme_distances(table);
    if (!range) continue;
    const LevelSchedule s(range->r_min, range->r_max, 1.0);
    if (s.levels() > 3) continue;
    const auto bounds = testing::random_bounds(n, k, rng);
    const auto net = level_network(build_level_regions(table, s), s, k, bounds,
                                   trial % 2 ? Objective::median : Objective::means);
    const auto expect = testing::enumerate_integral_flows(net);
    const auto sol = min_cost_max_flow(net);
    ASSERT_EQ(sol.has_value(), expect.has_value());
    if (!sol) continue;
    EXPECT_NEAR(sol->cost, *expect, 1e-9 * std::max(1.0, *expect));
    EXPECT_FALSE(has_negative_residual_cycle(net, *sol));
    ++compared;
  }
  EXPECT_GT(compared, 100);
}

TEST(MinCostFlowTest, NegativeCycleDetectorFlagsSuboptimalFlow) {
  const auto net = two_cluster({1, 1}, 1, 1, {{0, 0, 0}, {0, 1, 5}, {1, 0, 5}, {1, 1, 0}});
  FlowSolution bad{{0, 1, 1, 0}, 2, 10};
  verify_solution(net, bad);
  EXPECT_TRUE(has_negative_residual_cycle(net, bad));
  const auto good = min_cost_max_flow(net);
  ASSERT_TRUE(good);
  EXPECT_FALSE(has_negative_residual_cycle(net, *good));
}

TEST(VerifySolutionTest, RejectsBrokenFlows) {
  const auto net = two_cluster({2}, 1, 1, {{0, 0, 0}, {0, 1, 0}});
  EXPECT_THROW(verify_solution(net, {{2, 0}, 2, 0}), InvariantError);
  EXPECT_THROW(verify_solution(net, {{1, 0}, 1, 0}), InvariantError);
  EXPECT_THROW(verify_solution(net, {{1.5, -0.5}, 1, 0}), InvariantError);
  EXPECT_NO_THROW(verify_solution(net, {{1, 1}, 2, 0}));
}

TEST(NetworkTest, ValidateRejectsMalformed) {
  auto net = two_cluster({1}, 0, 1, {{0, 2, 0}});
  EXPECT_THROW(net.validate(), InvariantError);
  net = two_cluster({1}, 2, 1, {{0, 0, 0}});
  EXPECT_THROW(net.validate(), InvariantError);
  net = two_cluster({1}, 0, 1, {{0, 0, -1}});
  EXPECT_THROW((void)min_cost_max_flow(net), InvariantError);
}

}  // namespace
}  // namespace bclust
