#include "bclust/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>

#include "bclust/errors.hpp"

namespace bclust {

std::int64_t FlowNetwork::total_supply() const noexcept {
  std::int64_t total = 0;
  for (auto s : supplies) total += s;
  return total;
}

void FlowNetwork::validate() const {
  if (clusters == 0) throw InvariantError("flow network: no cluster nodes");
  if (lower < 0 || upper < lower)
    throw InvariantError("flow network: need 0 <= lower <= upper");
  for (std::size_t r = 0; r < supplies.size(); ++r)
    if (supplies[r] < 0) throw InvariantError("flow network: negative supply");
  for (const auto& e : edges) {
    if (e.region >= supplies.size() || e.cluster >= clusters)
      throw InvariantError("flow network: edge endpoint out of range");
    if (!(e.cost >= 0) || !std::isfinite(e.cost))
      throw InvariantError("flow network: edge costs must be finite and >= 0");
  }
}

std::vector<double> region_outflows(const FlowNetwork& net,
                                    const std::vector<double>& flows) {
  std::vector<double> out(net.supplies.size(), 0.0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) out[net.edges[e].region] += flows[e];
  return out;
}

std::vector<double> cluster_inflows(const FlowNetwork& net,
                                    const std::vector<double>& flows) {
  std::vector<double> in(net.clusters, 0.0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) in[net.edges[e].cluster] += flows[e];
  return in;
}

double flow_cost(const FlowNetwork& net, const std::vector<double>& flows) {
  double cost = 0;
  for (std::size_t e = 0; e < net.edges.size(); ++e) cost += net.edges[e].cost * flows[e];
  return cost;
}

FlowNetwork coverage_network(const CoverageRegions& regions, std::size_t k,
                             const BalanceBounds& bounds) {
  FlowNetwork net;
  net.clusters = k;
  net.lower = static_cast<std::int64_t>(bounds.lower);
  net.upper = static_cast<std::int64_t>(bounds.upper);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    net.supplies.push_back(static_cast<std::int64_t>(regions[r].count()));
    for (std::size_t j = 0; j < k; ++j)
      if (regions[r].signature >> j & 1u) net.edges.push_back({r, j, 0.0});
  }
  return net;
}

FlowNetwork level_network(const LevelRegions& regions, const LevelSchedule& schedule,
                          std::size_t k, const BalanceBounds& bounds,
                          Objective objective) {
  FlowNetwork net;
  net.clusters = k;
  net.lower = static_cast<std::int64_t>(bounds.lower);
  net.upper = static_cast<std::int64_t>(bounds.upper);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& sig = regions[r].signature;
    net.supplies.push_back(static_cast<std::int64_t>(regions[r].count()));
    for (std::size_t j = 0; j < k; ++j) {
      double cost = 0;
      if (!(sig.at_center >> j & 1u)) {
        const double alpha = schedule.alpha(sig.levels[j]);
        cost = objective == Objective::means ? alpha * alpha : alpha;
      }
      net.edges.push_back({r, j, cost});
    }
  }
  return net;
}

CapacityInstance reduce_demands_to_capacities(const FlowNetwork& net) {
  net.validate();
  const std::size_t regions = net.supplies.size();
  const std::size_t k = net.clusters;
  CapacityInstance inst;
  inst.source = 0;
  inst.sink = 1;
  const std::size_t surplus = 2;
  const std::size_t region0 = 3;
  const std::size_t cluster0 = region0 + regions;
  inst.nodes = cluster0 + k;
  const std::int64_t n = net.total_supply();
  inst.required = n;

  for (std::size_t r = 0; r < regions; ++r)
    inst.arcs.push_back({inst.source, region0 + r, net.supplies[r], 0.0});
  for (const auto& e : net.edges) {
    inst.edge_arcs.push_back(inst.arcs.size());
    inst.arcs.push_back({region0 + e.region, cluster0 + e.cluster, net.supplies[e.region],
                         e.cost});
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (net.lower > 0) inst.arcs.push_back({cluster0 + j, inst.sink, net.lower, 0.0});
    if (net.upper > net.lower)
      inst.arcs.push_back({cluster0 + j, surplus, net.upper - net.lower, 0.0});
  }
  // If k * lower > n no flow of value n can saturate the lower arcs; the
  // negative surplus capacity is clamped and the solve reports infeasible.
  const std::int64_t free_units = n - static_cast<std::int64_t>(k) * net.lower;
  if (free_units > 0) inst.arcs.push_back({surplus, inst.sink, free_units, 0.0});
  return inst;
}

namespace {

/// Residual graph with paired forward/backward arcs (arc ^ 1 is the twin).
class Residual {
 public:
  explicit Residual(const CapacityInstance& inst) : adjacency_(inst.nodes) {
    for (const auto& a : inst.arcs) {
      adjacency_[a.from].push_back(to_.size());
      to_.push_back(a.to);
      cap_.push_back(a.capacity);
      cost_.push_back(a.cost);
      adjacency_[a.to].push_back(to_.size());
      to_.push_back(a.from);
      cap_.push_back(0);
      cost_.push_back(-a.cost);
    }
  }

  std::int64_t edmonds_karp(std::size_t s, std::size_t t) {
    std::int64_t total = 0;
    std::vector<std::size_t> via(adjacency_.size());
    while (true) {
      std::fill(via.begin(), via.end(), kNone);
      std::deque<std::size_t> queue{s};
      via[s] = kRoot;
      while (!queue.empty() && via[t] == kNone) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t a : adjacency_[v]) {
          if (cap_[a] > 0 && via[to_[a]] == kNone) {
            via[to_[a]] = a;
            queue.push_back(to_[a]);
          }
        }
      }
      if (via[t] == kNone) return total;
      total += augment(s, t, via);
    }
  }

  std::pair<std::int64_t, double> successive_shortest_paths(std::size_t s, std::size_t t) {
    const std::size_t nodes = adjacency_.size();
    std::vector<double> potential(nodes, 0.0);
    std::vector<double> dist(nodes);
    std::vector<std::size_t> via(nodes);
    std::int64_t total = 0;
    double cost = 0;
    using Item = std::pair<double, std::size_t>;
    while (true) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::fill(via.begin(), via.end(), kNone);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[s] = 0;
      via[s] = kRoot;
      heap.push({0.0, s});
      while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        for (std::size_t a : adjacency_[v]) {
          if (cap_[a] <= 0) continue;
          const std::size_t w = to_[a];
          // Reduced costs are nonnegative up to rounding noise.
          const double reduced = std::max(0.0, cost_[a] + potential[v] - potential[w]);
          if (d + reduced < dist[w]) {
            dist[w] = d + reduced;
            via[w] = a;
            heap.push({dist[w], w});
          }
        }
      }
      if (via[t] == kNone) return {total, cost};
      for (std::size_t v = 0; v < nodes; ++v)
        if (dist[v] < kInf) potential[v] += dist[v];
      const std::int64_t pushed = augment(s, t, via);
      double path_cost = 0;
      for (std::size_t v = t; v != s; v = to_[via[v] ^ 1]) path_cost += cost_[via[v]];
      total += pushed;
      cost += path_cost * static_cast<double>(pushed);
    }
  }

  /// Flow on the i-th forward arc.
  std::int64_t flow(std::size_t arc_index) const { return cap_[2 * arc_index + 1]; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kRoot = kNone - 1;
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::int64_t augment(std::size_t s, std::size_t t, const std::vector<std::size_t>& via) {
    std::int64_t bottleneck = std::numeric_limits<std::int64_t>::max();
    for (std::size_t v = t; v != s; v = to_[via[v] ^ 1])
      bottleneck = std::min(bottleneck, cap_[via[v]]);
    for (std::size_t v = t; v != s; v = to_[via[v] ^ 1]) {
      cap_[via[v]] -= bottleneck;
      cap_[via[v] ^ 1] += bottleneck;
    }
    return bottleneck;
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> to_;
  std::vector<std::int64_t> cap_;
  std::vector<double> cost_;
};

std::vector<std::int64_t> arc_flows(const Residual& residual, std::size_t arc_count) {
  std::vector<std::int64_t> flows(arc_count);
  for (std::size_t a = 0; a < arc_count; ++a) flows[a] = residual.flow(a);
  return flows;
}

std::optional<FlowSolution> to_solution(const FlowNetwork& net,
                                        const CapacityInstance& inst,
                                        const CapacityFlow& flow) {
  if (flow.value != inst.required) return std::nullopt;
  FlowSolution sol;
  sol.flows.resize(net.edges.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    sol.flows[e] = static_cast<double>(flow.arc_flows[inst.edge_arcs[e]]);
  sol.total = static_cast<double>(flow.value);
  sol.cost = flow_cost(net, sol.flows);
  verify_solution(net, sol);
  return sol;
}

}  // namespace

CapacityFlow solve_max_flow(const CapacityInstance& instance) {
  Residual residual(instance);
  CapacityFlow out;
  out.value = residual.edmonds_karp(instance.source, instance.sink);
  out.arc_flows = arc_flows(residual, instance.arcs.size());
  for (std::size_t a = 0; a < instance.arcs.size(); ++a)
    out.cost += instance.arcs[a].cost * static_cast<double>(out.arc_flows[a]);
  return out;
}

CapacityFlow solve_min_cost_max_flow(const CapacityInstance& instance) {
  for (const auto& a : instance.arcs)
    if (a.cost < 0) throw InvariantError("min-cost flow: negative arc cost");
  Residual residual(instance);
  CapacityFlow out;
  std::tie(out.value, out.cost) =
      residual.successive_shortest_paths(instance.source, instance.sink);
  out.arc_flows = arc_flows(residual, instance.arcs.size());
  return out;
}

std::optional<FlowSolution> max_flow(const FlowNetwork& net) {
  const auto inst = reduce_demands_to_capacities(net);
  return to_solution(net, inst, solve_max_flow(inst));
}

std::optional<FlowSolution> min_cost_max_flow(const FlowNetwork& net) {
  const auto inst = reduce_demands_to_capacities(net);
  return to_solution(net, inst, solve_min_cost_max_flow(inst));
}

void verify_solution(const FlowNetwork& net, const FlowSolution& solution,
                     double tolerance) {
  if (solution.flows.size() != net.edges.size())
    throw InvariantError("flow solution: one flow value per edge expected");
  for (std::size_t e = 0; e < solution.flows.size(); ++e) {
    if (!(solution.flows[e] >= -tolerance)) {
      std::ostringstream msg;
      msg << "flow solution: edge " << e << " carries negative flow "
          << solution.flows[e];
      throw InvariantError(msg.str());
    }
  }
  const auto out = region_outflows(net, solution.flows);
  for (std::size_t r = 0; r < out.size(); ++r) {
    if (std::abs(out[r] - static_cast<double>(net.supplies[r])) > tolerance) {
      std::ostringstream msg;
      msg << "flow solution: region " << r << " ships " << out[r] << " of supply "
          << net.supplies[r];
      throw InvariantError(msg.str());
    }
  }
  const auto in = cluster_inflows(net, solution.flows);
  for (std::size_t j = 0; j < in.size(); ++j) {
    if (in[j] < static_cast<double>(net.lower) - tolerance ||
        in[j] > static_cast<double>(net.upper) + tolerance) {
      std::ostringstream msg;
      msg << "flow solution: cluster " << j << " receives " << in[j]
          << ", outside [" << net.lower << ", " << net.upper << "]";
      throw InvariantError(msg.str());
    }
  }
  const double total = static_cast<double>(net.total_supply());
  if (std::abs(solution.total - total) > tolerance)
    throw InvariantError("flow solution: reported total does not match supplies");
  const double cost = flow_cost(net, solution.flows);
  if (std::abs(solution.cost - cost) > tolerance * std::max(1.0, std::abs(cost)))
    throw InvariantError("flow solution: reported cost does not match flows");
}

bool is_integral(const FlowSolution& solution, double tolerance) {
  return std::all_of(solution.flows.begin(), solution.flows.end(), [&](double x) {
    return std::abs(x - std::round(x)) <= tolerance;
  });
}

bool has_negative_residual_cycle(const FlowNetwork& net, const FlowSolution& solution,
                                 double tolerance) {
  const std::size_t regions = net.supplies.size();
  const std::size_t k = net.clusters;
  const std::size_t sink = regions + k;
  const std::size_t nodes = sink + 1;
  struct Arc {
    std::size_t from, to;
    double cost;
  };
  std::vector<Arc> arcs;
  const double eps = 1e-9;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& edge = net.edges[e];
    const std::size_t r = edge.region;
    const std::size_t c = regions + edge.cluster;
    if (solution.flows[e] < static_cast<double>(net.supplies[r]) - eps)
      arcs.push_back({r, c, edge.cost});
    if (solution.flows[e] > eps) arcs.push_back({c, r, -edge.cost});
  }
  const auto in = cluster_inflows(net, solution.flows);
  for (std::size_t j = 0; j < k; ++j) {
    if (in[j] < static_cast<double>(net.upper) - eps) arcs.push_back({regions + j, sink, 0});
    if (in[j] > static_cast<double>(net.lower) + eps) arcs.push_back({sink, regions + j, 0});
  }
  // All-zero start acts as a virtual root connected to every node.
  std::vector<double> dist(nodes, 0.0);
  for (std::size_t round = 0; round < nodes; ++round) {
    bool changed = false;
    for (const auto& a : arcs) {
      if (dist[a.from] + a.cost < dist[a.to] - tolerance) {
        dist[a.to] = dist[a.from] + a.cost;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

}  // namespace bclust
