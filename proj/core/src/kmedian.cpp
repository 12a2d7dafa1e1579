#include "bclust/kmedian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "bclust/errors.hpp"
#include "bclust/kcenter.hpp"
#include "bclust/parallel.hpp"
#include "bclust/rounding.hpp"

namespace bclust {

namespace {

void require_sum_objective(Objective objective) {
  if (objective == Objective::center)
    throw InputError("assignment LP needs the median or means objective");
}

double charge(double d, Objective objective) {
  return objective == Objective::means ? d * d : d;
}

/// (T + 1)^k, saturating at cap + 1.
std::uint64_t potential_regions(std::size_t levels, std::size_t k, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (total > cap / (levels + 1)) return cap + 1;
    total *= levels + 1;
  }
  return total;
}

AssignmentLPResult degenerate_result(std::size_t n, std::size_t k) {
  AssignmentLPResult out;
  out.assignment = BalancedAssignment::round_robin(n, k);
  out.degenerate = true;
  return out;
}

}  // namespace

std::optional<AssignmentLPResult> exact_assignment_flow(const DistanceTable& columns,
                                                        const BalanceBounds& bounds,
                                                        Objective objective) {
  require_sum_objective(objective);
  const std::size_t n = columns.rows();
  const std::size_t k = columns.cols();
  FlowNetwork net;
  net.clusters = k;
  net.lower = static_cast<std::int64_t>(bounds.lower);
  net.upper = static_cast<std::int64_t>(bounds.upper);
  net.supplies.assign(n, 1);
  net.edges.reserve(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) net.edges.push_back({i, j, charge(columns(i, j), objective)});
  auto flow = min_cost_max_flow(net);
  if (!flow) return std::nullopt;
  std::vector<std::size_t> labels(n);
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (flow->flows[e] > 0.5) labels[net.edges[e].region] = net.edges[e].cluster;
  AssignmentLPResult out;
  out.assignment = BalancedAssignment(std::move(labels), k);
  out.true_cost = evaluate_objective(out.assignment, columns, objective);
  out.lp_objective = flow->cost;
  out.region_flows = std::move(*flow);
  out.fallback = true;
  out.regions = n;
  return out;
}

std::optional<AssignmentLPResult> assignment_lp(const DistanceTable& columns,
                                                const BalanceBounds& bounds,
                                                Objective objective,
                                                const AssignmentLPOptions& options) {
  require_sum_objective(objective);
  const std::size_t n = columns.rows();
  const std::size_t k = columns.cols();
  if (k == 0 || k > 64) throw InputError("assignment LP needs 1 <= k <= 64");
  if (static_cast<std::uint64_t>(bounds.lower) * k > n || bounds.upper * k < n)
    return std::nullopt;

  const auto range = extreme_distances(columns);
  if (!range) return degenerate_result(n, k);
  const LevelSchedule schedule(range->r_min, range->r_max, options.epsilon);
  if (potential_regions(schedule.levels(), k, options.region_cap) > options.region_cap) {
    auto exact = exact_assignment_flow(columns, bounds, objective);
    if (exact) exact->levels = schedule.levels();
    return exact;
  }

  const LevelRegions regions = build_level_regions(columns, schedule);
  const FlowNetwork net = level_network(regions, schedule, k, bounds, objective);
  const auto flow = min_cost_max_flow(net);
  if (!flow) return std::nullopt;
  if (regions.size() <= 4096 && has_negative_residual_cycle(net, *flow))
    throw InvariantError("assignment LP: min-cost flow failed its optimality check");
  RoundingReport rounded = round_to_integral(*flow, net, RoundingMode::min_cost);

  AssignmentLPResult out;
  out.assignment = expand_assignment(rounded.solution, net, regions);
  out.true_cost = evaluate_objective(out.assignment, columns, objective);
  out.lp_objective = rounded.solution.cost;
  out.region_flows = std::move(rounded.solution);
  out.regions = regions.size();
  out.levels = schedule.levels();
  out.rounding_steps = rounded.steps.size();
  return out;
}

std::optional<AssignmentLPResult> assignment_lp(const DistanceOracle& oracle,
                                                std::span<const CenterRef> centers,
                                                const BalanceBounds& bounds,
                                                Objective objective,
                                                const AssignmentLPOptions& options) {
  return assignment_lp(distance_table(oracle, centers), bounds, objective, options);
}

namespace {

struct ColumnRange {
  double min_positive = std::numeric_limits<double>::infinity();
  double max = 0;
};

/// Count-only evaluation of the ring LP for one tuple: regions are keyed by a
/// packed code (digit j = 0 on the center, else level + 1).
class LevelScreen {
 public:
  LevelScreen(const DistanceTable& table, const std::vector<double>& logs,
              const std::vector<ColumnRange>& ranges, const BalancedOptions& options)
      : table_(table), logs_(logs), ranges_(ranges), options_(options) {}

  struct Score {
    double lp_objective = 0;
    bool fallback = false;
  };

  std::optional<Score> evaluate(const std::vector<std::size_t>& tuple) {
    const std::size_t n = table_.rows();
    const std::size_t k = tuple.size();
    DistanceRange range{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t c : tuple) {
      range.r_min = std::min(range.r_min, ranges_[c].min_positive);
      range.r_max = std::max(range.r_max, ranges_[c].max);
    }
    if (range.r_max == 0) return Score{0, false};
    const LevelSchedule schedule(range.r_min, range.r_max, options_.lp.epsilon);
    const std::uint64_t cap = options_.lp.region_cap;
    if (potential_regions(schedule.levels(), k, cap) > cap) {
      auto exact = exact_assignment_flow(table_.select_columns(tuple), options_.bounds,
                                         options_.objective);
      if (!exact) return std::nullopt;
      return Score{exact->lp_objective, true};
    }

    const std::uint64_t base = schedule.levels() + 2;
    const std::uint64_t codes = potential_regions(base - 1, k, kDenseCodes);
    const bool dense = codes <= kDenseCodes;
    if (dense && dense_.size() < codes) dense_.resize(codes, 0);
    sparse_.clear();
    order_.clear();
    const std::size_t cols = table_.cols();
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t code = 0;
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t at = i * cols + tuple[j];
        const double d = table_.values()[at];
        const std::uint64_t digit = d == 0 ? 0 : schedule.level_of(d, logs_[at]) + 1;
        code = code * base + digit;
      }
      std::int64_t& slot = dense ? dense_[code] : sparse_[code];
      if (slot++ == 0) order_.push_back(code);
    }

    FlowNetwork net;
    net.clusters = k;
    net.lower = static_cast<std::int64_t>(options_.bounds.lower);
    net.upper = static_cast<std::int64_t>(options_.bounds.upper);
    net.supplies.reserve(order_.size());
    std::vector<std::uint64_t> digits(k);
    for (std::uint64_t code : order_) {
      const std::size_t r = net.supplies.size();
      std::int64_t& slot = dense ? dense_[code] : sparse_[code];
      net.supplies.push_back(slot);
      slot = 0;
      std::uint64_t rest = code;
      for (std::size_t j = k; j-- > 0;) {
        digits[j] = rest % base;
        rest /= base;
      }
      for (std::size_t j = 0; j < k; ++j) {
        const double cost =
            digits[j] == 0 ? 0.0 : charge(schedule.alpha(digits[j] - 1), options_.objective);
        net.edges.push_back({r, j, cost});
      }
    }
    const auto inst = reduce_demands_to_capacities(net);
    const auto flow = solve_min_cost_max_flow(inst);
    if (flow.value != inst.required) return std::nullopt;
    return Score{flow.cost, false};
  }

 private:
  static constexpr std::uint64_t kDenseCodes = std::uint64_t{1} << 16;

  const DistanceTable& table_;
  const std::vector<double>& logs_;
  const std::vector<ColumnRange>& ranges_;
  const BalancedOptions& options_;
  // Region counts by code, in a flat array when the code space is small.
  std::vector<std::int64_t> dense_;
  std::unordered_map<std::uint64_t, std::int64_t> sparse_;
  std::vector<std::uint64_t> order_;
};

struct ChunkResult {
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
  bool found = false;
  std::size_t fallbacks = 0;
  std::vector<TupleScore> per_tuple;
};

}  // namespace

ClusteringResult solve_balanced(const DistanceOracle& oracle, const BalancedOptions& options,
                                const CandidateGenerator& generator) {
  require_sum_objective(options.objective);
  const std::size_t n = oracle.size();
  options.bounds.validate(n, options.k);
  if (generator.k() != options.k) throw InputError("generator produces tuples of the wrong size");
  if (generator.tuple_count() == 0) throw InputError("generator yields no tuples");
  if (!(options.lp.epsilon > 0)) throw InputError("epsilon must be > 0");

  const auto& candidates = generator.candidates();
  const DistanceTable table = distance_table(oracle, candidates, options.threads);
  std::vector<double> logs(table.values().size());
  std::transform(table.values().begin(), table.values().end(), logs.begin(),
                 [](double d) { return d > 0 ? std::log(d) : 0.0; });
  std::vector<ColumnRange> ranges(table.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      const double d = table(i, c);
      ranges[c].max = std::max(ranges[c].max, d);
      if (d > 0) ranges[c].min_positive = std::min(ranges[c].min_positive, d);
    }
  }

  const std::uint64_t count = generator.tuple_count();
  std::vector<ChunkResult> chunks(std::max<std::size_t>(1, options.threads));
  parallel_chunks(static_cast<std::size_t>(count), options.threads,
                  [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                    ChunkResult& local = chunks[chunk];
                    LevelScreen screen(table, logs, ranges, options);
                    for (std::size_t t = begin; t < end; ++t) {
                      const auto tuple = generator.tuple(t);
                      const auto score = screen.evaluate(tuple);
                      if (!score) continue;
                      if (score->fallback) ++local.fallbacks;
                      if (options.record_per_tuple)
                        local.per_tuple.push_back({tuple, score->lp_objective});
                      if (!local.found || score->lp_objective < local.best) {
                        local.found = true;
                        local.best = score->lp_objective;
                        local.best_index = t;
                      }
                    }
                  });

  ClusteringResult result;
  result.objective = options.objective;
  auto& diag = result.diagnostics;
  diag.candidates = candidates.size();
  diag.tuples_total = static_cast<std::size_t>(count);
  diag.tuples_evaluated = static_cast<std::size_t>(count);
  diag.epsilon = options.lp.epsilon;
  ChunkResult merged;
  for (auto& c : chunks) {
    merged.fallbacks += c.fallbacks;
    if (c.found && (!merged.found || c.best < merged.best)) {
      merged.found = true;
      merged.best = c.best;
      merged.best_index = c.best_index;
    }
    for (auto& s : c.per_tuple) diag.per_tuple.push_back(std::move(s));
  }
  if (!merged.found) throw InvariantError("no candidate tuple admits a balanced assignment");

  const auto tuple = generator.tuple(merged.best_index);
  const DistanceTable columns = table.select_columns(tuple);
  auto lp = assignment_lp(columns, options.bounds, options.objective, options.lp);
  if (!lp) throw InvariantError("chosen tuple lost feasibility on re-evaluation");
  lp->assignment.check_within(options.bounds);

  for (std::size_t c : tuple) result.centers.push_back(candidates[c]);
  result.assignment = lp->assignment;
  result.value = evaluate_objective(result.assignment, result.centers, oracle, options.objective);
  diag.chosen_tuple = tuple;
  diag.lp_objective = lp->lp_objective;
  diag.fallbacks = merged.fallbacks;
  diag.degenerate = lp->degenerate;
  diag.regions = lp->regions;
  diag.levels = lp->levels;
  diag.rounding_steps = lp->rounding_steps;
  return result;
}

}  // namespace bclust
