#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bclust/flow.hpp"

namespace bclust {

/// An edge flow x counts as fractional iff min(x - floor x, ceil x - x)
/// exceeds this.
inline constexpr double kFractionalTolerance = 1e-9;

bool is_fractional(double x) noexcept;

enum class RoundingMode { feasibility, min_cost };

struct NodeRef {
  enum class Side { region, cluster };
  Side side = Side::region;
  std::size_t index = 0;

  bool operator==(const NodeRef&) const = default;
};

/// The fractional edges of a flow and their incidence lists (edge indices in
/// increasing order).
class FractionalResidue {
 public:
  FractionalResidue(const FlowNetwork& net, const std::vector<double>& flows);

  bool empty() const noexcept { return edges_.empty(); }
  const std::vector<std::size_t>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& incident(const NodeRef& node) const;
  const FlowNetwork& network() const noexcept { return *net_; }

  NodeRef other_end(std::size_t edge, const NodeRef& from) const;

 private:
  const FlowNetwork* net_;
  std::vector<std::size_t> edges_;
  std::vector<std::vector<std::size_t>> region_incidence_;
  std::vector<std::vector<std::size_t>> cluster_incidence_;
};

/// A closed alternating cycle (nodes.size() == edges.size(), edges[i] joins
/// nodes[i] and nodes[(i + 1) % size]) or an open path between two cluster
/// nodes (nodes.size() == edges.size() + 1).
struct Structure {
  enum class Kind { cycle, path };
  Kind kind = Kind::cycle;
  std::vector<NodeRef> nodes;
  std::vector<std::size_t> edges;
};

/// Grows a walk from the lowest-index fractional edge in both directions
/// until it closes a cycle or both ends are stuck. Throws InvariantError if
/// a stuck end is a region node.
Structure grow_structure(const FractionalResidue& residue);

struct Adjustment {
  double delta = 0;
  /// Cost change per unit of delta in the chosen direction (subtract on
  /// edges[0], add on edges[1], ...).
  double alternating_cost = 0;
};

/// Tolerance on the alternating cost of a cycle or path in min-cost mode.
inline constexpr double kCostNeutralTolerance = 1e-9;

/// Subtracts delta on even positions and adds it on odd positions, delta
/// being the smallest distance to the next integer in that direction.
/// Region and cluster throughputs are unchanged. In min-cost mode a nonzero
/// alternating cost raises OptimalityError.
Adjustment adjust_cycle(std::vector<double>& flows, const Structure& cycle,
                        const FlowNetwork& net, RoundingMode mode);

/// Like adjust_cycle for a cluster-to-cluster path; delta is additionally
/// capped by (inflow(first) - lower) and (upper - inflow(last)).
Adjustment adjust_path(std::vector<double>& flows, const Structure& path,
                       const FlowNetwork& net, RoundingMode mode);

struct RoundingStep {
  Structure::Kind kind = Structure::Kind::cycle;
  std::size_t length = 0;
  Adjustment adjustment;
};

struct RoundingReport {
  FlowSolution solution;
  std::vector<RoundingStep> steps;
  double max_abs_alternating_cost = 0;
};

/// Repeats grow_structure + adjust until no fractional edge remains. Every
/// intermediate flow is checked against the cluster bounds. The returned
/// flows are exact integers; total is unchanged and, in min-cost mode, cost
/// moves by at most 1e-9 per adjustment.
RoundingReport round_to_integral(const FlowSolution& solution, const FlowNetwork& net,
                                 RoundingMode mode);

}  // namespace bclust
