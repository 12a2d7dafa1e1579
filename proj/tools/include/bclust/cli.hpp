#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bclust/io.hpp"
#include "bclust/metric.hpp"
#include "bclust/result.hpp"

namespace bclust::cli {

enum class Generator { gonzalez, bicriteria };

struct RunConfig {
  std::string input;
  io::InputFormat format = io::InputFormat::csv_points;
  bool header = false;
  Objective objective = Objective::center;
  std::size_t k = 1;
  /// Unset bounds default to floor(n/k) and ceil(n/k).
  std::optional<std::size_t> lower;
  std::optional<std::size_t> upper;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> first_index;
  /// Unset: gonzalez for center, bicriteria otherwise.
  std::optional<Generator> generator;
  std::size_t bicriteria_factor = 8;
  std::string output;
  bool emit_assignment = false;
  bool emit_diagnostics = false;
  bool compare_oracle = false;
  /// 0 means one worker per hardware thread.
  std::size_t threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;

BalanceBounds resolve_bounds(const RunConfig& config, std::size_t n);

/// Runs the solver selected by config on an already loaded input.
ClusteringResult solve(const DistanceOracle& oracle, const RunConfig& config);

/// Loads the input, solves, and writes the JSON document to config.output
/// (or `out` when empty). Errors go to `err`; returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::size_t dim = 32;
  std::size_t k = 3;
  std::vector<Objective> objectives{Objective::center};
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::size_t bicriteria_factor = 8;
  std::size_t repeats = 1;
  std::size_t threads = 1;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  Objective objective = Objective::center;
  double wall_time = 0;  // seconds, best of the repeats
  double cost = 0;
};

/// Gaussian blobs around k uniformly drawn centers in [0, 10]^d.
PointSet synthetic_points(std::size_t n, std::size_t d, std::size_t k, std::uint64_t seed);

std::vector<BenchRow> run_bench(const BenchConfig& config);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

/// Full command line entry point (subcommands run, bench, fixture).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bclust::cli
