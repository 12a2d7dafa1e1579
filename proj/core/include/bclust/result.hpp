#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bclust/metric.hpp"

namespace bclust {

struct TupleScore {
  std::vector<std::size_t> tuple;  // indices into the candidate list
  double value = 0;                // radius (center) or LP objective
};

struct Diagnostics {
  std::size_t candidates = 0;
  std::size_t tuples_total = 0;
  std::size_t tuples_evaluated = 0;
  std::size_t tuples_pruned = 0;
  std::size_t radius_probes = 0;
  std::size_t fallbacks = 0;
  bool degenerate = false;
  std::vector<std::size_t> chosen_tuple;
  std::optional<double> radius;
  std::optional<double> lp_objective;
  std::optional<double> epsilon;
  std::size_t regions = 0;
  std::size_t levels = 0;
  std::size_t rounding_steps = 0;
  std::optional<double> candidate_cost;  // unconstrained cost of the candidate set
  std::vector<TupleScore> per_tuple;
};

struct ClusteringResult {
  Objective objective = Objective::center;
  std::vector<CenterRef> centers;
  BalancedAssignment assignment;
  double value = 0;
  Diagnostics diagnostics;
};

}  // namespace bclust
