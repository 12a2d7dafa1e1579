#include "bclust/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "bclust/errors.hpp"

namespace bclust {

namespace {

double down_slack(double x) { return x - std::floor(x); }
double up_slack(double x) { return std::ceil(x) - x; }

void snap(std::vector<double>& flows) {
  for (double& x : flows) {
    const double r = std::round(x);
    if (std::abs(x - r) <= kFractionalTolerance) x = r;
  }
}

NodeRef region_node(std::size_t r) { return {NodeRef::Side::region, r}; }
NodeRef cluster_node(std::size_t c) { return {NodeRef::Side::cluster, c}; }

std::string name(const NodeRef& node) {
  std::ostringstream out;
  out << (node.side == NodeRef::Side::region ? "region " : "cluster ") << node.index;
  return out.str();
}

double alternating_cost(const Structure& s, const FlowNetwork& net) {
  double sum = 0;
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    const double c = net.edges[s.edges[i]].cost;
    sum += (i % 2 == 0) ? -c : c;
  }
  return sum;
}

void apply(std::vector<double>& flows, const Structure& s, double delta) {
  for (std::size_t i = 0; i < s.edges.size(); ++i)
    flows[s.edges[i]] += (i % 2 == 0) ? -delta : delta;
}

double edge_slack(const std::vector<double>& flows, const Structure& s) {
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.edges.size(); ++i) {
    const double x = flows[s.edges[i]];
    delta = std::min(delta, (i % 2 == 0) ? down_slack(x) : up_slack(x));
  }
  return delta;
}

void check_cost_neutral(const Structure& s, double alt, RoundingMode mode) {
  if (mode != RoundingMode::min_cost) return;
  if (std::abs(alt) > kCostNeutralTolerance) {
    std::ostringstream msg;
    msg << (s.kind == Structure::Kind::cycle ? "cycle" : "path") << " of length "
        << s.edges.size() << " has alternating cost " << alt
        << "; the flow is not of minimum cost";
    throw OptimalityError(msg.str());
  }
}

}  // namespace

bool is_fractional(double x) noexcept {
  return std::min(down_slack(x), up_slack(x)) > kFractionalTolerance;
}

FractionalResidue::FractionalResidue(const FlowNetwork& net,
                                     const std::vector<double>& flows)
    : net_(&net),
      region_incidence_(net.supplies.size()),
      cluster_incidence_(net.clusters) {
  if (flows.size() != net.edges.size())
    throw InvariantError("residue: one flow value per edge expected");
  for (std::size_t e = 0; e < flows.size(); ++e) {
    if (!is_fractional(flows[e])) continue;
    edges_.push_back(e);
    region_incidence_[net.edges[e].region].push_back(e);
    cluster_incidence_[net.edges[e].cluster].push_back(e);
  }
}

const std::vector<std::size_t>& FractionalResidue::incident(const NodeRef& node) const {
  return node.side == NodeRef::Side::region ? region_incidence_[node.index]
                                            : cluster_incidence_[node.index];
}

NodeRef FractionalResidue::other_end(std::size_t edge, const NodeRef& from) const {
  const auto& e = net_->edges[edge];
  return from.side == NodeRef::Side::region ? cluster_node(e.cluster)
                                            : region_node(e.region);
}

Structure grow_structure(const FractionalResidue& residue) {
  if (residue.empty()) throw InvariantError("grow_structure: residue is empty");
  const std::size_t first = residue.edges().front();
  const auto& e0 = residue.network().edges[first];

  // Walk as a deque of nodes; `links[i]` joins walk[i] and walk[i + 1].
  std::deque<NodeRef> walk{region_node(e0.region), cluster_node(e0.cluster)};
  std::deque<std::size_t> links{first};

  auto position = [&](const NodeRef& node) -> std::ptrdiff_t {
    auto it = std::find(walk.begin(), walk.end(), node);
    return it == walk.end() ? -1 : it - walk.begin();
  };

  auto close_cycle = [&](std::size_t from, std::size_t to, std::size_t closing_edge) {
    // Nodes walk[from..to] plus the closing edge back to walk[from].
    Structure cycle;
    cycle.kind = Structure::Kind::cycle;
    for (std::size_t i = from; i <= to; ++i) cycle.nodes.push_back(walk[i]);
    for (std::size_t i = from; i < to; ++i) cycle.edges.push_back(links[i]);
    cycle.edges.push_back(closing_edge);
    return cycle;
  };

  // Extend the back end until stuck or a cycle closes.
  while (true) {
    const NodeRef end = walk.back();
    const std::size_t arrived = links.back();
    std::size_t next = std::numeric_limits<std::size_t>::max();
    for (std::size_t e : residue.incident(end))
      if (e != arrived) { next = e; break; }
    if (next == std::numeric_limits<std::size_t>::max()) break;
    const NodeRef node = residue.other_end(next, end);
    if (const auto at = position(node); at >= 0)
      return close_cycle(static_cast<std::size_t>(at), walk.size() - 1, next);
    walk.push_back(node);
    links.push_back(next);
  }
  // Then the front end.
  while (true) {
    const NodeRef end = walk.front();
    const std::size_t arrived = links.front();
    std::size_t next = std::numeric_limits<std::size_t>::max();
    for (std::size_t e : residue.incident(end))
      if (e != arrived) { next = e; break; }
    if (next == std::numeric_limits<std::size_t>::max()) break;
    const NodeRef node = residue.other_end(next, end);
    if (const auto at = position(node); at >= 0) {
      // Cycle runs from the front (new edge) to walk[at]; reorder so the
      // closing edge comes last.
      Structure cycle;
      cycle.kind = Structure::Kind::cycle;
      for (std::ptrdiff_t i = at; i >= 0; --i) cycle.nodes.push_back(walk[i]);
      for (std::ptrdiff_t i = at - 1; i >= 0; --i) cycle.edges.push_back(links[i]);
      cycle.edges.push_back(next);
      return cycle;
    }
    walk.push_front(node);
    links.push_front(next);
  }

  for (const NodeRef* end : {&walk.front(), &walk.back()}) {
    if (end->side == NodeRef::Side::region)
      throw InvariantError("grow_structure: path ends at " + name(*end) +
                           ", whose supply cannot then be integral");
  }
  Structure path;
  path.kind = Structure::Kind::path;
  path.nodes.assign(walk.begin(), walk.end());
  path.edges.assign(links.begin(), links.end());
  return path;
}

Adjustment adjust_cycle(std::vector<double>& flows, const Structure& cycle,
                        const FlowNetwork& net, RoundingMode mode) {
  if (cycle.kind != Structure::Kind::cycle || cycle.edges.size() < 4 ||
      cycle.edges.size() % 2 != 0)
    throw InvariantError("adjust_cycle: expected an even alternating cycle");
  Adjustment adj;
  adj.alternating_cost = alternating_cost(cycle, net);
  check_cost_neutral(cycle, adj.alternating_cost, mode);
  adj.delta = edge_slack(flows, cycle);
  apply(flows, cycle, adj.delta);
  snap(flows);
  return adj;
}

Adjustment adjust_path(std::vector<double>& flows, const Structure& path,
                       const FlowNetwork& net, RoundingMode mode) {
  if (path.kind != Structure::Kind::path || path.edges.empty() ||
      path.edges.size() % 2 != 0 || path.nodes.front().side != NodeRef::Side::cluster ||
      path.nodes.back().side != NodeRef::Side::cluster)
    throw InvariantError("adjust_path: expected a path between two cluster nodes");
  Adjustment adj;
  adj.alternating_cost = alternating_cost(path, net);
  check_cost_neutral(path, adj.alternating_cost, mode);
  const auto inflow = cluster_inflows(net, flows);
  const double first_slack = inflow[path.nodes.front().index] - static_cast<double>(net.lower);
  const double last_slack = static_cast<double>(net.upper) - inflow[path.nodes.back().index];
  adj.delta = std::min({first_slack, last_slack, edge_slack(flows, path)});
  if (!(adj.delta > 0)) {
    std::ostringstream msg;
    msg << "adjust_path: no positive slack (endpoint slacks " << first_slack << ", "
        << last_slack << ")";
    throw InvariantError(msg.str());
  }
  apply(flows, path, adj.delta);
  snap(flows);
  return adj;
}

RoundingReport round_to_integral(const FlowSolution& solution, const FlowNetwork& net,
                                 RoundingMode mode) {
  verify_solution(net, solution, 1e-7);
  RoundingReport report;
  std::vector<double> flows = solution.flows;
  snap(flows);
  const double cost_before = flow_cost(net, flows);
  const std::size_t limit = net.edges.size() + 1;
  while (true) {
    FractionalResidue residue(net, flows);
    if (residue.empty()) break;
    if (report.steps.size() >= limit)
      throw InvariantError("round_to_integral: no progress after |E| adjustments");
    const std::size_t before = residue.edges().size();
    const Structure s = grow_structure(residue);
    RoundingStep step;
    step.kind = s.kind;
    step.length = s.edges.size();
    step.adjustment = s.kind == Structure::Kind::cycle ? adjust_cycle(flows, s, net, mode)
                                                       : adjust_path(flows, s, net, mode);
    report.max_abs_alternating_cost =
        std::max(report.max_abs_alternating_cost, std::abs(step.adjustment.alternating_cost));
    report.steps.push_back(step);

    const auto inflow = cluster_inflows(net, flows);
    for (std::size_t j = 0; j < inflow.size(); ++j) {
      if (inflow[j] < static_cast<double>(net.lower) - kFractionalTolerance ||
          inflow[j] > static_cast<double>(net.upper) + kFractionalTolerance)
        throw InvariantError("round_to_integral: cluster bound violated mid-sequence");
    }
    if (FractionalResidue(net, flows).edges().size() >= before)
      throw InvariantError("round_to_integral: adjustment made no edge integral");
  }
  for (double& x : flows) x = std::round(x);
  report.solution.flows = std::move(flows);
  report.solution.total = static_cast<double>(net.total_supply());
  report.solution.cost = flow_cost(net, report.solution.flows);
  verify_solution(net, report.solution);
  if (mode == RoundingMode::min_cost) {
    const double allowed = 1e-9 * static_cast<double>(report.steps.size() + 1) *
                           std::max(1.0, std::abs(cost_before));
    if (std::abs(report.solution.cost - cost_before) > allowed)
      throw InvariantError("round_to_integral: cost changed during min-cost rounding");
  }
  return report;
}

}  // namespace bclust
