#include <chrono>
#include <ostream>
#include <random>

#include "bclust/cli.hpp"
#include "bclust/errors.hpp"

namespace bclust::cli {

PointSet synthetic_points(std::size_t n, std::size_t d, std::size_t k, std::uint64_t seed) {
  if (n == 0 || d == 0 || k == 0) throw InputError("synthetic points: empty shape");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> where(0.0, 10.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> centers(k * d);
  for (double& c : centers) c = where(rng);
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = i % k;
    for (std::size_t t = 0; t < d; ++t) coords[i * d + t] = centers[g * d + t] + noise(rng);
  }
  return PointSet(d, std::move(coords));
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (std::size_t n : config.sizes) {
    const auto oracle =
        DistanceOracle::euclidean(synthetic_points(n, config.dim, config.k, config.seed));
    for (Objective objective : config.objectives) {
      RunConfig rc;
      rc.objective = objective;
      rc.k = config.k;
      rc.epsilon = config.epsilon;
      rc.seed = config.seed;
      rc.bicriteria_factor = config.bicriteria_factor;
      rc.threads = config.threads;
      BenchRow row{n, config.dim, config.k, objective, 0, 0};
      for (std::size_t rep = 0; rep < std::max<std::size_t>(1, config.repeats); ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const ClusteringResult result = solve(oracle, rc);
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        if (rep == 0 || took.count() < row.wall_time) row.wall_time = took.count();
        row.cost = result.value;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "n,d,k,objective,wall_time,cost\n";
  const auto precision = out.precision(17);
  for (const auto& r : rows)
    out << r.n << ',' << r.d << ',' << r.k << ',' << to_string(r.objective) << ','
        << r.wall_time << ',' << r.cost << '\n';
  out.precision(precision);
}

}  // namespace bclust::cli
