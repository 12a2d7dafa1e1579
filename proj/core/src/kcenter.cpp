#include "bclust/kcenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bclust/errors.hpp"
#include "bclust/parallel.hpp"

namespace bclust {

SeedSequence gonzalez(const DistanceOracle& oracle, std::size_t k, std::size_t first_index) {
  const std::size_t n = oracle.size();
  if (k == 0 || k > n) throw InputError("gonzalez: need 1 <= k <= n");
  if (first_index >= n) throw InputError("gonzalez: first index out of range");
  SeedSequence seeds;
  seeds.first_index = first_index;
  seeds.indices.push_back(first_index);
  std::vector<double> nearest(n);
  std::vector<bool> chosen(n, false);
  chosen[first_index] = true;
  for (std::size_t i = 0; i < n; ++i) nearest[i] = oracle.distance(i, first_index);
  while (seeds.indices.size() < k) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!chosen[i] && (best == n || nearest[i] > nearest[best])) best = i;
    chosen[best] = true;
    seeds.indices.push_back(best);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], oracle.distance(i, best));
  }
  return seeds;
}

double seed_cover_radius(const DistanceOracle& oracle, const SeedSequence& seeds) {
  double radius = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t s : seeds.indices) nearest = std::min(nearest, oracle.distance(i, s));
    radius = std::max(radius, nearest);
  }
  return radius;
}

RadiusLadder RadiusLadder::from_table(const DistanceTable& table) {
  RadiusLadder ladder{table.values()};
  std::sort(ladder.values.begin(), ladder.values.end());
  ladder.values.erase(std::unique(ladder.values.begin(), ladder.values.end()),
                      ladder.values.end());
  return ladder;
}

std::optional<FeasibleCover> check_feasible(const DistanceTable& table,
                                            std::span<const std::size_t> tuple,
                                            double radius, const BalanceBounds& bounds) {
  if (tuple.empty()) throw InputError("check_feasible: empty tuple");
  for (std::size_t c : tuple)
    if (c >= table.cols()) throw InputError("check_feasible: tuple column out of range");
  const DistanceTable columns = table.select_columns(tuple);
  auto regions = build_coverage_regions(columns, radius);
  if (!regions) return std::nullopt;
  FlowNetwork net = coverage_network(*regions, tuple.size(), bounds);
  auto flow = max_flow(net);
  if (!flow) return std::nullopt;
  return FeasibleCover{std::move(*regions), std::move(net), std::move(*flow)};
}

template <class Signature>
BalancedAssignment expand_assignment(const FlowSolution& flow, const FlowNetwork& net,
                                     const RegionTable<Signature>& regions) {
  if (regions.size() != net.supplies.size() || flow.flows.size() != net.edges.size())
    throw InvariantError("expand_assignment: flow does not match the region table");
  std::vector<std::vector<std::size_t>> region_edges(regions.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    region_edges[net.edges[e].region].push_back(e);

  std::size_t n = 0;
  for (const auto& r : regions.entries())
    for (std::size_t m : r.members) n = std::max(n, m + 1);
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> labels(n, kUnset);

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& members = regions[r].members;
    std::size_t next = 0;
    for (std::size_t e : region_edges[r]) {
      const double x = flow.flows[e];
      const double units = std::round(x);
      if (std::abs(x - units) > 1e-9 || units < 0)
        throw InvariantError("expand_assignment: flow is not integral");
      for (std::size_t u = 0; u < static_cast<std::size_t>(units); ++u) {
        if (next >= members.size())
          throw InvariantError("expand_assignment: region flows exceed its point count");
        labels[members[next++]] = net.edges[e].cluster;
      }
    }
    if (next != members.size())
      throw InvariantError("expand_assignment: region flows do not cover its points");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i] == kUnset) throw InvariantError("expand_assignment: point not in any region");
  return BalancedAssignment(std::move(labels), net.clusters);
}

template BalancedAssignment expand_assignment(const FlowSolution&, const FlowNetwork&,
                                              const CoverageRegions&);
template BalancedAssignment expand_assignment(const FlowSolution&, const FlowNetwork&,
                                              const LevelRegions&);

namespace {

/// Per-thread buffers for count-only feasibility probes.
class CoverageProbe {
 public:
  CoverageProbe(const DistanceTable& table, const BalanceBounds& bounds)
      : table_(table), bounds_(bounds) {}

  bool feasible(std::span<const std::size_t> tuple, double radius) {
    const std::size_t k = tuple.size();
    counts_.clear();
    for (std::size_t i = 0; i < table_.rows(); ++i) {
      CoverageSignature mask = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (within_radius(table_(i, tuple[j]), radius)) mask |= CoverageSignature{1} << j;
      if (mask == 0) return false;
      auto it = std::find_if(counts_.begin(), counts_.end(),
                             [&](const auto& c) { return c.first == mask; });
      if (it == counts_.end()) counts_.emplace_back(mask, 1);
      else ++it->second;
    }
    FlowNetwork net;
    net.clusters = k;
    net.lower = static_cast<std::int64_t>(bounds_.lower);
    net.upper = static_cast<std::int64_t>(bounds_.upper);
    for (std::size_t r = 0; r < counts_.size(); ++r) {
      net.supplies.push_back(counts_[r].second);
      for (std::size_t j = 0; j < k; ++j)
        if (counts_[r].first >> j & 1u) net.edges.push_back({r, j, 0.0});
    }
    const auto inst = reduce_demands_to_capacities(net);
    return solve_max_flow(inst).value == inst.required;
  }

 private:
  const DistanceTable& table_;
  BalanceBounds bounds_;
  // At most 2^k - 1 distinct masks; a short vector beats hashing here.
  std::vector<std::pair<CoverageSignature, std::int64_t>> counts_;
};

std::vector<std::size_t> decode_tuple(std::uint64_t index, std::size_t base, std::size_t k) {
  std::vector<std::size_t> tuple(k);
  for (std::size_t j = k; j-- > 0;) {
    tuple[j] = static_cast<std::size_t>(index % base);
    index /= base;
  }
  return tuple;
}

struct ChunkBest {
  std::size_t ladder_index = std::numeric_limits<std::size_t>::max();
  std::uint64_t tuple_index = 0;
  std::size_t evaluated = 0;
  std::size_t pruned = 0;
  std::size_t probes = 0;
  std::vector<TupleScore> per_tuple;
};

}  // namespace

ClusteringResult solve_kbcenter(const DistanceOracle& oracle, const KCenterOptions& options) {
  const std::size_t n = oracle.size();
  const std::size_t k = options.k;
  options.bounds.validate(n, k);
  if (k > kMaxCoverageBalls) throw InputError("k-center supports k <= 64");

  std::size_t first = 0;
  if (options.first_index) {
    if (*options.first_index >= n) throw InputError("first-index out of range");
    first = *options.first_index;
  } else if (options.random_first) {
    std::mt19937_64 rng(options.seed);
    first = static_cast<std::size_t>(rng() % n);
  }
  const SeedSequence seeds = gonzalez(oracle, k, first);
  std::vector<CenterRef> candidates(seeds.indices.begin(), seeds.indices.end());
  const DistanceTable table = distance_table(oracle, candidates, options.threads);

  ClusteringResult result;
  result.objective = Objective::center;
  result.diagnostics.candidates = k;

  std::vector<std::size_t> identity(k);
  for (std::size_t j = 0; j < k; ++j) identity[j] = j;

  if (!extreme_distances(table)) {
    result.centers = candidates;
    result.assignment = BalancedAssignment::round_robin(n, k);
    result.value = 0;
    result.diagnostics.degenerate = true;
    result.diagnostics.chosen_tuple = identity;
    result.diagnostics.radius = 0.0;
    return result;
  }

  const RadiusLadder ladder = RadiusLadder::from_table(table);
  std::uint64_t tuple_count = 1;
  if (!options.seed_tuple_only) {
    for (std::size_t j = 0; j < k; ++j) {
      if (tuple_count > options.tuple_cap / k)
        throw InputError("k-center: k^k tuples exceed the tuple cap; use a smaller k");
      tuple_count *= k;
    }
  }
  result.diagnostics.tuples_total = static_cast<std::size_t>(tuple_count);

  std::vector<ChunkBest> chunks(std::max<std::size_t>(1, options.threads));
  parallel_chunks(
      static_cast<std::size_t>(tuple_count), options.threads,
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        ChunkBest& best = chunks[chunk];
        CoverageProbe probe(table, options.bounds);
        for (std::size_t t = begin; t < end; ++t) {
          const auto tuple = options.seed_tuple_only ? identity : decode_tuple(t, k, k);
          // Every point must be covered, so radii below this are infeasible.
          double bound = 0;
          for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t c : tuple) nearest = std::min(nearest, table(i, c));
            bound = std::max(bound, nearest);
          }
          std::size_t lo = static_cast<std::size_t>(
              std::lower_bound(ladder.values.begin(), ladder.values.end(), bound) -
              ladder.values.begin());
          std::size_t hi_excl = std::min(best.ladder_index, ladder.values.size());
          if (lo >= hi_excl) {
            ++best.pruned;
            continue;
          }
          ++best.evaluated;
          std::size_t found = std::numeric_limits<std::size_t>::max();
          std::size_t left = lo, right = hi_excl;  // search in [left, right)
          while (left < right) {
            const std::size_t mid = left + (right - left) / 2;
            ++best.probes;
            if (probe.feasible(tuple, ladder.values[mid])) {
              found = mid;
              right = mid;
            } else {
              left = mid + 1;
            }
          }
          if (options.record_per_tuple)
            best.per_tuple.push_back(
                {tuple, found == std::numeric_limits<std::size_t>::max()
                            ? std::numeric_limits<double>::infinity()
                            : ladder.values[found]});
          if (found < best.ladder_index) {
            best.ladder_index = found;
            best.tuple_index = t;
          }
        }
      });

  ChunkBest merged;
  for (auto& c : chunks) {
    merged.evaluated += c.evaluated;
    merged.pruned += c.pruned;
    merged.probes += c.probes;
    if (c.ladder_index < merged.ladder_index) {
      merged.ladder_index = c.ladder_index;
      merged.tuple_index = c.tuple_index;
    }
    for (auto& s : c.per_tuple) result.diagnostics.per_tuple.push_back(std::move(s));
  }
  if (merged.ladder_index == std::numeric_limits<std::size_t>::max())
    throw InvariantError("k-center: no tuple is feasible at the largest radius");

  const auto tuple = options.seed_tuple_only ? identity : decode_tuple(merged.tuple_index, k, k);
  const double radius = ladder.values[merged.ladder_index];
  const auto cover = check_feasible(table, tuple, radius, options.bounds);
  if (!cover) throw InvariantError("k-center: chosen radius failed re-verification");

  result.assignment = expand_assignment(cover->flow, cover->network, cover->regions);
  result.assignment.check_within(options.bounds);
  for (std::size_t c : tuple) result.centers.push_back(candidates[c]);
  result.value = evaluate_objective(result.assignment, table.select_columns(tuple),
                                    Objective::center);
  if (!within_radius(result.value, radius))
    throw InvariantError("k-center: expanded assignment exceeds the feasible radius");

  auto& diag = result.diagnostics;
  diag.tuples_evaluated = merged.evaluated;
  diag.tuples_pruned = merged.pruned;
  diag.radius_probes = merged.probes;
  diag.chosen_tuple = tuple;
  diag.radius = result.value;
  diag.regions = cover->regions.size();
  return result;
}

}  // namespace bclust
