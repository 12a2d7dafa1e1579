#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "bclust/candidates.hpp"
#include "bclust/flow.hpp"
#include "bclust/metric.hpp"
#include "bclust/regions.hpp"
#include "bclust/result.hpp"

namespace bclust {

struct AssignmentLPOptions {
  double epsilon = 1.0;
  /// Above (T + 1)^k potential regions the exact per-point assignment is
  /// used instead of the ring LP.
  std::uint64_t region_cap = std::uint64_t{1} << 20;
};

struct AssignmentLPResult {
  FlowSolution region_flows;
  /// Sum of ring costs: alpha_{l_j} per point (median) or alpha_{l_j}^2 (means).
  double lp_objective = 0;
  /// Objective of the expanded per-point assignment.
  double true_cost = 0;
  BalancedAssignment assignment;
  bool fallback = false;
  bool degenerate = false;
  std::size_t regions = 0;
  std::size_t levels = 0;  // T
  std::size_t rounding_steps = 0;
};

/// Balanced assignment of every point to one of the k centers whose distance
/// columns are given, through the ring-region min-cost flow. Objective must
/// be median or means. Returns std::nullopt only if the bounds admit no flow.
std::optional<AssignmentLPResult> assignment_lp(const DistanceTable& columns,
                                                const BalanceBounds& bounds,
                                                Objective objective,
                                                const AssignmentLPOptions& options = {});

std::optional<AssignmentLPResult> assignment_lp(const DistanceOracle& oracle,
                                                std::span<const CenterRef> centers,
                                                const BalanceBounds& bounds,
                                                Objective objective,
                                                const AssignmentLPOptions& options = {});

/// Exact optimal balanced assignment for fixed centers via per-point
/// min-cost flow (unit supplies). Used when the ring LP would be too large.
std::optional<AssignmentLPResult> exact_assignment_flow(const DistanceTable& columns,
                                                        const BalanceBounds& bounds,
                                                        Objective objective);

struct BalancedOptions {
  std::size_t k = 1;
  BalanceBounds bounds;
  Objective objective = Objective::median;
  AssignmentLPOptions lp;
  std::size_t threads = 1;
  bool record_per_tuple = false;
};

/// Evaluates the assignment LP on every tuple of the generator and returns the
/// tuple with the smallest LP objective (first in generation order on ties).
ClusteringResult solve_balanced(const DistanceOracle& oracle, const BalancedOptions& options,
                                const CandidateGenerator& generator);

}  // namespace bclust
