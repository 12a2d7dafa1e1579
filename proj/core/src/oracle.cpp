#include "bclust/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "bclust/errors.hpp"
#include "bclust/regions.hpp"

namespace bclust::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-point transportation model solved by successive shortest paths with
/// Bellman-Ford (queue-based) searches. Each cluster has a mandatory arc of
/// capacity L and cost -penalty, plus an optional arc of capacity U - L.
/// A feasible assignment exists iff all mandatory arcs end up saturated.
class PointwiseFlow {
 public:
  PointwiseFlow(const DistanceTable& columns, const BalanceBounds& bounds,
                const std::function<std::optional<double>(std::size_t, std::size_t)>& cost)
      : n_(columns.rows()), k_(columns.cols()), head_(n_ + k_ + 2) {
    const std::size_t source = n_ + k_;
    const std::size_t sink = source + 1;
    double max_cost = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      add(source, i, 1, 0);
      for (std::size_t j = 0; j < k_; ++j) {
        if (auto c = cost(i, j)) {
          max_cost = std::max(max_cost, *c);
          add(i, n_ + j, 1, *c);
        }
      }
    }
    penalty_ = 1.0 + 2.0 * static_cast<double>(n_) * max_cost;
    for (std::size_t j = 0; j < k_; ++j) {
      mandatory_.push_back(arcs_.size());
      add(n_ + j, sink, static_cast<long>(bounds.lower), -penalty_);
      if (bounds.upper > bounds.lower)
        add(n_ + j, sink, static_cast<long>(bounds.upper - bounds.lower), 0);
    }
    run(source, sink);
  }

  bool feasible() const {
    if (shipped_ != static_cast<long>(n_)) return false;
    for (std::size_t a : mandatory_)
      if (arcs_[a].cap != 0) return false;
    return true;
  }

  std::vector<std::size_t> labels() const {
    std::vector<std::size_t> out(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t a : head_[i])
        if (a % 2 == 0 && arcs_[a].to >= n_ && arcs_[a].to < n_ + k_ && arcs_[a].cap == 0)
          out[i] = arcs_[a].to - n_;
    return out;
  }

 private:
  struct Arc {
    std::size_t to;
    long cap;
    double cost;
  };

  void add(std::size_t from, std::size_t to, long cap, double cost) {
    head_[from].push_back(arcs_.size());
    arcs_.push_back({to, cap, cost});
    head_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0, -cost});
  }

  void run(std::size_t source, std::size_t sink) {
    const std::size_t nodes = head_.size();
    while (true) {
      std::vector<double> dist(nodes, kInf);
      std::vector<std::size_t> via(nodes, arcs_.size());
      std::vector<bool> queued(nodes, false);
      std::deque<std::size_t> queue{source};
      dist[source] = 0;
      while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        queued[v] = false;
        for (std::size_t a : head_[v]) {
          const Arc& arc = arcs_[a];
          if (arc.cap > 0 && dist[v] + arc.cost < dist[arc.to] - 1e-12) {
            dist[arc.to] = dist[v] + arc.cost;
            via[arc.to] = a;
            if (!queued[arc.to]) {
              queued[arc.to] = true;
              queue.push_back(arc.to);
            }
          }
        }
      }
      if (dist[sink] == kInf) return;
      for (std::size_t v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        --arcs_[via[v]].cap;
        ++arcs_[via[v] ^ 1].cap;
      }
      ++shipped_;
    }
  }

  std::size_t n_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> head_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> mandatory_;
  double penalty_ = 1;
  long shipped_ = 0;
};

double charge(double d, Objective objective) {
  return objective == Objective::means ? d * d : d;
}

double combine(double acc, double part, Objective objective) {
  return objective == Objective::center ? std::max(acc, part) : acc + part;
}

}  // namespace

bool bipartite_feasible(const DistanceTable& columns, double radius,
                        const BalanceBounds& bounds) {
  PointwiseFlow flow(columns, bounds, [&](std::size_t i, std::size_t j) -> std::optional<double> {
    if (within_radius(columns(i, j), radius)) return 0.0;
    return std::nullopt;
  });
  return flow.feasible();
}

AssignmentOptimum exact_balanced_assignment(const DistanceTable& columns,
                                            const BalanceBounds& bounds,
                                            Objective objective) {
  const std::size_t k = columns.cols();
  if (objective == Objective::center) {
    std::vector<double> radii = columns.values();
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::size_t lo = 0, hi = radii.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (bipartite_feasible(columns, radii[mid], bounds)) hi = mid;
      else lo = mid + 1;
    }
    if (lo == radii.size()) throw InfeasibleBoundsError("exact assignment: bounds infeasible");
    PointwiseFlow flow(columns, bounds, [&](std::size_t i, std::size_t j) -> std::optional<double> {
      if (within_radius(columns(i, j), radii[lo])) return 0.0;
      return std::nullopt;
    });
    AssignmentOptimum out{0, BalancedAssignment(flow.labels(), k)};
    out.cost = evaluate_objective(out.assignment, columns, objective);
    return out;
  }
  PointwiseFlow flow(columns, bounds, [&](std::size_t i, std::size_t j) -> std::optional<double> {
    return charge(columns(i, j), objective);
  });
  if (!flow.feasible()) throw InfeasibleBoundsError("exact assignment: bounds infeasible");
  AssignmentOptimum out{0, BalancedAssignment(flow.labels(), k)};
  out.cost = evaluate_objective(out.assignment, columns, objective);
  return out;
}

MinimumBall minimum_enclosing_ball(const PointSet& points,
                                   const std::vector<std::size_t>& members) {
  if (members.empty()) throw InputError("minimum_enclosing_ball: no points");
  const std::size_t d = points.dim();
  const std::size_t support = std::min(d + 1, members.size());
  MinimumBall best{{}, kInf};
  std::vector<std::size_t> pick;

  auto try_support = [&]() {
    // Circumcenter of the picked points within their affine hull.
    const auto p0 = points[members[pick[0]]];
    const std::size_t m = pick.size() - 1;
    std::vector<std::vector<double>> dirs(m, std::vector<double>(d));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t t = 0; t < d; ++t) dirs[a][t] = points[members[pick[a + 1]]][t] - p0[t];
    std::vector<std::vector<double>> g(m, std::vector<double>(m + 1));
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b)
        g[a][b] = std::inner_product(dirs[a].begin(), dirs[a].end(), dirs[b].begin(), 0.0);
      g[a][m] = 0.5 * g[a][a];
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m; ++r)
        if (std::abs(g[r][col]) > std::abs(g[piv][col])) piv = r;
      if (std::abs(g[piv][col]) < 1e-12) return;
      std::swap(g[piv], g[col]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = g[r][col] / g[col][col];
        for (std::size_t c = col; c <= m; ++c) g[r][c] -= f * g[col][c];
      }
    }
    std::vector<double> center(p0.begin(), p0.end());
    for (std::size_t a = 0; a < m; ++a) {
      const double lambda = g[a][m] / g[a][a];
      for (std::size_t t = 0; t < d; ++t) center[t] += lambda * dirs[a][t];
    }
    const double radius = euclidean(center, p0);
    if (radius >= best.radius) return;
    for (std::size_t idx : members)
      if (euclidean(center, points[idx]) > radius * (1 + 1e-9) + 1e-12) return;
    best = {std::move(center), radius};
  };

  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (!pick.empty()) try_support();
    if (pick.size() == support) return;
    for (std::size_t i = from; i < members.size(); ++i) {
      pick.push_back(i);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

GlobalOptimum brute_force_optimum(const DistanceOracle& oracle, std::size_t k,
                                  const BalanceBounds& bounds, Objective objective,
                                  CenterMode mode) {
  const std::size_t n = oracle.size();
  if (n > kBruteForceMaxPoints || k > kBruteForceMaxK) {
    std::ostringstream msg;
    msg << "brute force is limited to n <= " << kBruteForceMaxPoints << " and k <= "
        << kBruteForceMaxK;
    throw InputError(msg.str());
  }
  bounds.validate(n, k);
  const bool continuous = mode == CenterMode::continuous && objective != Objective::median;
  if (continuous && oracle.kind() != DistanceOracle::Kind::euclidean)
    throw InputError("continuous centers need Euclidean input");

  const std::size_t full = std::size_t{1} << n;
  std::vector<double> cost(full, kInf);
  std::vector<CenterRef> center(full);
  std::vector<std::size_t> members;
  for (std::size_t mask = 1; mask < full; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (!bounds.admits(size)) continue;
    members.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) members.push_back(i);
    if (continuous && objective == Objective::center) {
      auto ball = minimum_enclosing_ball(*oracle.points(), members);
      cost[mask] = ball.radius;
      center[mask] = std::move(ball.center);
    } else if (continuous) {
      const PointSet& pts = *oracle.points();
      std::vector<double> mean(pts.dim(), 0.0);
      for (std::size_t i : members)
        for (std::size_t t = 0; t < pts.dim(); ++t) mean[t] += pts[i][t];
      for (double& v : mean) v /= static_cast<double>(members.size());
      double total = 0;
      for (std::size_t i : members) total += squared_euclidean(pts[i], mean);
      cost[mask] = total;
      center[mask] = std::move(mean);
    } else {
      for (std::size_t c = 0; c < n; ++c) {
        double total = 0;
        for (std::size_t i : members)
          total = combine(total, charge(oracle.distance(i, c), objective), objective);
        if (total < cost[mask]) {
          cost[mask] = total;
          center[mask] = c;
        }
      }
    }
  }

  // Enumerate set partitions into exactly k blocks; the lowest unassigned
  // point always opens the next block.
  GlobalOptimum best;
  best.cost = kInf;
  std::vector<std::size_t> blocks;
  std::function<void(std::size_t, double)> search = [&](std::size_t used, double acc) {
    if (acc >= best.cost) return;
    if (blocks.size() == k) {
      if (used != full - 1) return;
      best.cost = acc;
      std::vector<std::size_t> labels(n);
      best.centers.clear();
      for (std::size_t b = 0; b < k; ++b) {
        for (std::size_t i = 0; i < n; ++i)
          if (blocks[b] >> i & 1u) labels[i] = b;
        best.centers.push_back(center[blocks[b]]);
      }
      best.assignment = BalancedAssignment(std::move(labels), k);
      return;
    }
    const std::size_t rest = (full - 1) & ~used;
    if (rest == 0) return;
    const std::size_t lowest = rest & (~rest + 1);
    const std::size_t others = rest & ~lowest;
    // Iterate all submasks of `others`, each combined with `lowest`.
    for (std::size_t sub = others;; sub = (sub - 1) & others) {
      const std::size_t block = sub | lowest;
      if (cost[block] < kInf) {
        blocks.push_back(block);
        search(used | block, combine(acc, cost[block], objective));
        blocks.pop_back();
      }
      if (sub == 0) break;
    }
  };
  search(0, 0.0);
  if (best.cost == kInf) throw InfeasibleBoundsError("brute force: no balanced partition");
  return best;
}

double brute_force_unconstrained(const DistanceOracle& oracle, std::size_t k,
                                 Objective objective) {
  const std::size_t n = oracle.size();
  if (n > 40 || k > 4 || k == 0 || k > n)
    throw InputError("unconstrained brute force is limited to n <= 40, 1 <= k <= 4");
  double best = kInf;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (pick.size() == k) {
      double total = 0;
      for (std::size_t i = 0; i < n; ++i) {
        double nearest = kInf;
        for (std::size_t c : pick) nearest = std::min(nearest, oracle.distance(i, c));
        total = combine(total, charge(nearest, objective), objective);
      }
      best = std::min(best, total);
      return;
    }
    for (std::size_t c = from; c < n; ++c) {
      pick.push_back(c);
      choose(c + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return best;
}

Fixture tightness_fixture(double delta) {
  if (!(delta > 0 && delta < 1)) throw InputError("tightness fixture needs 0 < delta < 1");
  Fixture f{.name = "tightness",
            .points = PointSet(1, {0.0, 2.0, 4.0 - delta, 6.0 - delta, 8.0 - 2 * delta,
                                   8.0 - 2 * delta}),
            .k = 3,
            .bounds = {2, 2},
            .first_index = 1,
            .optimum_radius = 1.0,
            .expected_seeds = {1, 4, 0},
            .optimal_clusters = {{0, 1}, {2, 3}, {4, 5}}};
  return f;
}

Fixture seed_set_fixture(double l, double r, double h) {
  if (!(l > 0 && l < 2 * r && 2 * r < h))
    throw InputError("seed-set fixture needs 0 < l < 2r < h");
  // p5 sits lower than p6 so it is strictly the farthest point from p1.
  Fixture f{.name = "seed-set",
            .points = PointSet(2, {0.0, 0.0, 0.0, 0.0, 0.0, l, 0.0, l, h, -2 * r, h, 0.0}),
            .k = 3,
            .bounds = {2, 2},
            .first_index = 0,
            .optimum_radius = r,
            .expected_seeds = {0, 4, 5},
            .optimal_clusters = {{0, 1}, {2, 3}, {4, 5}}};
  return f;
}

Fixture planted_fixture(std::size_t groups, std::size_t size, std::size_t dim) {
  if (groups == 0 || size == 0 || dim == 0) throw InputError("planted fixture: empty shape");
  std::vector<double> coords;
  Fixture f;
  f.name = "planted";
  for (std::size_t g = 0; g < groups; ++g) {
    std::vector<std::size_t> cluster;
    for (std::size_t s = 0; s < size; ++s) {
      cluster.push_back(coords.size() / dim);
      for (std::size_t t = 0; t < dim; ++t)
        coords.push_back(t == 0 ? 100.0 * static_cast<double>(g) : 7.0 * static_cast<double>(t));
    }
    f.optimal_clusters.push_back(std::move(cluster));
  }
  f.points = PointSet(dim, std::move(coords));
  f.k = groups;
  f.bounds = {size, size};
  f.optimum_radius = 0.0;
  return f;
}

std::vector<Fixture> fixtures() {
  return {tightness_fixture(0.1), seed_set_fixture(1.0, 1.0, 100.0), planted_fixture(3, 2)};
}

}  // namespace bclust::oracle
