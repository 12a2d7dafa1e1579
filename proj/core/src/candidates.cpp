#include "bclust/candidates.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "bclust/errors.hpp"
#include "bclust/kcenter.hpp"

namespace bclust {

TupleSpace::TupleSpace(std::size_t candidates, std::size_t k, std::uint64_t cap)
    : candidates_(candidates), k_(k), size_(1) {
  if (candidates == 0) throw InputError("tuple space: candidate list is empty");
  if (k == 0) throw InputError("tuple space: k must be >= 1");
  for (std::size_t j = 0; j < k; ++j) {
    if (size_ > cap / candidates) {
      std::ostringstream msg;
      msg << "tuple space: " << candidates << "^" << k << " tuples exceed the cap of "
          << cap << "; use a smaller k or a smaller candidate factor";
      throw InputError(msg.str());
    }
    size_ *= candidates;
  }
}

std::vector<std::size_t> TupleSpace::operator[](std::uint64_t index) const {
  std::vector<std::size_t> tuple(k_);
  for (std::size_t j = k_; j-- > 0;) {
    tuple[j] = static_cast<std::size_t>(index % candidates_);
    index /= candidates_;
  }
  return tuple;
}

TupleSpace enumerate_tuples(std::size_t candidates, std::size_t k, std::uint64_t cap) {
  return TupleSpace(candidates, k, cap);
}

ProductGenerator::ProductGenerator(std::vector<CenterRef> candidates, std::size_t k,
                                   std::uint64_t seed, std::uint64_t cap)
    : candidates_(std::move(candidates)), space_(candidates_.size(), k, cap), seed_(seed) {}

ProductGenerator gonzalez_generator(const DistanceOracle& oracle, std::size_t k,
                                    std::size_t first_index, std::uint64_t cap) {
  const auto seeds = gonzalez(oracle, k, first_index);
  return ProductGenerator({seeds.indices.begin(), seeds.indices.end()}, k, first_index, cap);
}

double unconstrained_cost(const DistanceOracle& oracle, std::span<const CenterRef> centers,
                          Objective objective) {
  if (centers.empty()) throw InputError("unconstrained_cost: no centers");
  double total = 0;
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : centers) nearest = std::min(nearest, oracle.distance_to(i, c));
    switch (objective) {
      case Objective::center: total = std::max(total, nearest); break;
      case Objective::median: total += nearest; break;
      case Objective::means: total += nearest * nearest; break;
    }
  }
  return total;
}

BicriteriaCenters bicriteria_centers(const DistanceOracle& oracle, std::size_t k,
                                     std::uint64_t seed, Objective objective,
                                     std::size_t factor) {
  const std::size_t n = oracle.size();
  if (k == 0 || k > n) throw InputError("bicriteria: need 1 <= k <= n");
  if (factor == 0) throw InputError("bicriteria: factor must be >= 1");
  const std::size_t draws = std::min(n, factor * k);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto add = [&](std::size_t c) {
    chosen.push_back(c);
    taken[c] = true;
    for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], oracle.distance(i, c));
  };

  add(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  std::vector<double> weight(n);
  while (chosen.size() < draws) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      weight[i] = objective == Objective::means ? nearest[i] * nearest[i] : nearest[i];
      total += weight[i];
    }
    if (!(total > 0)) break;
    double target = std::uniform_real_distribution<double>(0.0, total)(rng);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i] <= 0) continue;
      pick = i;
      if (target < weight[i]) break;
      target -= weight[i];
    }
    add(pick);
  }
  // Coincident inputs can exhaust positive weight before k centers exist.
  for (std::size_t i = 0; i < n && chosen.size() < k; ++i)
    if (!taken[i]) add(i);

  BicriteriaCenters out;
  if (objective == Objective::means && oracle.kind() == DistanceOracle::Kind::euclidean) {
    const PointSet& points = *oracle.points();
    const std::size_t m = chosen.size();
    std::vector<std::vector<double>> sums(m, std::vector<double>(points.dim(), 0.0));
    std::vector<std::size_t> counts(m, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < m; ++c)
        if (oracle.squared_distance(i, chosen[c]) < oracle.squared_distance(i, chosen[best]))
          best = c;
      ++counts[best];
      for (std::size_t d = 0; d < points.dim(); ++d) sums[best][d] += points[i][d];
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (counts[c] == 0) {
        const auto p = points[chosen[c]];
        out.centers.emplace_back(std::vector<double>(p.begin(), p.end()));
        continue;
      }
      for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
      out.centers.emplace_back(std::move(sums[c]));
    }
  } else {
    out.centers.assign(chosen.begin(), chosen.end());
  }
  out.cost = unconstrained_cost(oracle, out.centers, objective);
  return out;
}

ProductGenerator bicriteria_generator(const DistanceOracle& oracle, std::size_t k,
                                      std::uint64_t seed, Objective objective,
                                      std::size_t factor, std::uint64_t cap) {
  auto bc = bicriteria_centers(oracle, k, seed, objective, factor);
  return ProductGenerator(std::move(bc.centers), k, seed, cap);
}

}  // namespace bclust
