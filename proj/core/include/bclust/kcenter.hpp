#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bclust/flow.hpp"
#include "bclust/metric.hpp"
#include "bclust/regions.hpp"
#include "bclust/result.hpp"

namespace bclust {

/// Farthest-point traversal order: indices[0] is the start, each next index
/// maximizes the distance to the nearest earlier one (lowest index on ties).
struct SeedSequence {
  std::vector<std::size_t> indices;
  std::size_t first_index = 0;
};

SeedSequence gonzalez(const DistanceOracle& oracle, std::size_t k, std::size_t first_index);

/// The largest nearest-seed distance after running the traversal to k seeds,
/// i.e. the unconstrained k-center radius of the seed set.
double seed_cover_radius(const DistanceOracle& oracle, const SeedSequence& seeds);

/// Sorted, deduplicated entries of a distance table.
struct RadiusLadder {
  std::vector<double> values;

  static RadiusLadder from_table(const DistanceTable& table);
};

struct FeasibleCover {
  CoverageRegions regions;
  FlowNetwork network;
  FlowSolution flow;
};

/// Tests whether balls of radius r around the tuple's columns admit a
/// balanced partition covering every point. `tuple` indexes table columns.
std::optional<FeasibleCover> check_feasible(const DistanceTable& table,
                                            std::span<const std::size_t> tuple,
                                            double radius, const BalanceBounds& bounds);

/// Hands each region's members (in index order) to clusters following the
/// integral edge flows (in edge order).
template <class Signature>
BalancedAssignment expand_assignment(const FlowSolution& flow, const FlowNetwork& net,
                                     const RegionTable<Signature>& regions);

struct KCenterOptions {
  std::size_t k = 1;
  BalanceBounds bounds;
  /// Start of the farthest-point traversal; drawn from `seed` when unset and
  /// `random_first` is true, else 0.
  std::optional<std::size_t> first_index;
  bool random_first = false;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Only try the traversal order itself instead of all of S^k.
  bool seed_tuple_only = false;
  bool record_per_tuple = false;
  std::uint64_t tuple_cap = 10'000'000;
};

ClusteringResult solve_kbcenter(const DistanceOracle& oracle, const KCenterOptions& options);

}  // namespace bclust
