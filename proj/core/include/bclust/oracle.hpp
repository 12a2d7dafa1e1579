#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bclust/metric.hpp"

// Reference implementations for verification. They share no solver code
// with the production path and favor obviousness over speed.
namespace bclust::oracle {

struct AssignmentOptimum {
  double cost = 0;
  BalancedAssignment assignment;
};

/// Whether every point can be placed within `radius` of its cluster's
/// column while respecting the bounds, decided by a per-point bipartite flow.
bool bipartite_feasible(const DistanceTable& columns, double radius,
                        const BalanceBounds& bounds);

/// Optimal balanced assignment for fixed centers (one column per center).
/// Median/means: per-point min-cost flow. Center: smallest table value that
/// passes bipartite_feasible. Intended for n up to a few thousand.
AssignmentOptimum exact_balanced_assignment(const DistanceTable& columns,
                                            const BalanceBounds& bounds,
                                            Objective objective);

enum class CenterMode {
  /// Centers are input points (repeats allowed).
  discrete,
  /// Euclidean only: minimum enclosing ball centers (center) or centroids
  /// (means). Median stays discrete, which over-estimates the continuous
  /// optimum by at most a factor 2.
  continuous,
};

struct GlobalOptimum {
  double cost = 0;
  std::vector<CenterRef> centers;
  BalancedAssignment assignment;
};

inline constexpr std::size_t kBruteForceMaxPoints = 16;
inline constexpr std::size_t kBruteForceMaxK = 4;

/// Exact optimum over all balanced partitions into k clusters; each cluster
/// takes its own best center under `mode`. Throws InputError above
/// kBruteForceMaxPoints points or kBruteForceMaxK clusters.
GlobalOptimum brute_force_optimum(const DistanceOracle& oracle, std::size_t k,
                                  const BalanceBounds& bounds, Objective objective,
                                  CenterMode mode);

/// Minimum unconstrained cost over all k-subsets of input points used as
/// centers (nearest-center assignment). n <= 40, k <= 4.
double brute_force_unconstrained(const DistanceOracle& oracle, std::size_t k,
                                 Objective objective);

struct MinimumBall {
  std::vector<double> center;
  double radius = 0;
};

/// Smallest ball enclosing the given points (exhaustive over support sets of
/// up to d + 1 points).
MinimumBall minimum_enclosing_ball(const PointSet& points,
                                   const std::vector<std::size_t>& members);

struct Fixture {
  std::string name;
  PointSet points;
  std::size_t k = 1;
  BalanceBounds bounds;
  std::optional<std::size_t> first_index;
  /// Known optimum radius for the center objective (continuous centers).
  std::optional<double> optimum_radius;
  /// Expected farthest-point traversal from first_index.
  std::vector<std::size_t> expected_seeds;
  std::vector<std::vector<std::size_t>> optimal_clusters;
};

/// Six collinear points 0, 2, 4 - delta, 6 - delta, 8 - 2 delta, 8 - 2 delta;
/// k = 3, L = U = 2, traversal starting at index 1. Needs 0 < delta < 1.
Fixture tightness_fixture(double delta);

/// Two coincident pairs on a vertical line (spacing l) and a vertical pair
/// 2r apart at horizontal offset h; k = 3, L = U = 2, traversal starting at
/// index 0. Needs 0 < l < 2r < h.
Fixture seed_set_fixture(double l, double r, double h);

/// `groups` clusters of `size` coincident points, far apart; k = groups,
/// L = U = size. Optimum 0 for every objective.
Fixture planted_fixture(std::size_t groups, std::size_t size, std::size_t dim = 2);

std::vector<Fixture> fixtures();

}  // namespace bclust::oracle
