#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bclust/metric.hpp"
#include "bclust/regions.hpp"

namespace bclust {

/// One variable x^j_sig: flow from region node `region` to cluster node
/// `cluster`, charged `cost` per unit.
struct FlowEdge {
  std::size_t region = 0;
  std::size_t cluster = 0;
  double cost = 0;
};

/// Bipartite transportation instance. Region r must ship exactly supplies[r];
/// every cluster must receive between `lower` and `upper` units.
struct FlowNetwork {
  std::vector<std::int64_t> supplies;
  std::size_t clusters = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::vector<FlowEdge> edges;

  std::int64_t total_supply() const noexcept;
  /// Throws InvariantError on malformed structure.
  void validate() const;
};

struct FlowSolution {
  std::vector<double> flows;  // one per network edge
  double total = 0;
  double cost = 0;
};

std::vector<double> region_outflows(const FlowNetwork& net, const std::vector<double>& flows);
std::vector<double> cluster_inflows(const FlowNetwork& net, const std::vector<double>& flows);
double flow_cost(const FlowNetwork& net, const std::vector<double>& flows);

/// Region -> cluster edge iff the cluster's bit is set in the region mask;
/// all costs zero.
FlowNetwork coverage_network(const CoverageRegions& regions, std::size_t k,
                             const BalanceBounds& bounds);

/// Every region connects to every cluster. Edge cost is alpha_{l_j}
/// (median) or alpha_{l_j}^2 (means), and 0 for points sitting on c_j.
FlowNetwork level_network(const LevelRegions& regions, const LevelSchedule& schedule,
                          std::size_t k, const BalanceBounds& bounds,
                          Objective objective);

/// Plain capacitated digraph produced by the demand reduction.
struct CapacityArc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t capacity = 0;
  double cost = 0;
};

/// Node layout: 0 = source, 1 = sink, 2 = surplus collector, then regions,
/// then clusters. Source -> region (supply), region -> cluster (supply, edge
/// cost), cluster -> sink (lower), cluster -> surplus (upper - lower),
/// surplus -> sink (n - k * lower). A source-sink flow of value `required`
/// saturates every sink arc and corresponds one-to-one with a feasible flow
/// of the original network.
struct CapacityInstance {
  std::size_t nodes = 0;
  std::size_t source = 0;
  std::size_t sink = 1;
  std::vector<CapacityArc> arcs;
  std::int64_t required = 0;
  std::vector<std::size_t> edge_arcs;  // arc index of each network edge
};

CapacityInstance reduce_demands_to_capacities(const FlowNetwork& net);

struct CapacityFlow {
  std::int64_t value = 0;
  double cost = 0;
  std::vector<std::int64_t> arc_flows;
};

/// Edmonds-Karp on a capacity instance.
CapacityFlow solve_max_flow(const CapacityInstance& instance);

/// Successive shortest paths with Dijkstra on reduced costs. Costs must be
/// nonnegative. Returns a maximum flow of minimum cost.
CapacityFlow solve_min_cost_max_flow(const CapacityInstance& instance);

/// Integral feasible flow, or std::nullopt when no flow meets every demand.
std::optional<FlowSolution> max_flow(const FlowNetwork& net);

/// Integral feasible flow of minimum cost, or std::nullopt if infeasible.
std::optional<FlowSolution> min_cost_max_flow(const FlowNetwork& net);

/// Checks nonnegativity, region conservation, cluster bounds and the
/// reported total/cost against `tolerance`. Throws InvariantError.
void verify_solution(const FlowNetwork& net, const FlowSolution& solution,
                     double tolerance = 1e-9);

bool is_integral(const FlowSolution& solution, double tolerance = 1e-9);

/// Bellman-Ford over the residual graph of a feasible flow (regions,
/// clusters and the sink with its [lower, upper] arcs). A cycle of cost
/// below -tolerance means the flow is not of minimum cost.
bool has_negative_residual_cycle(const FlowNetwork& net, const FlowSolution& solution,
                                 double tolerance = 1e-9);

}  // namespace bclust
