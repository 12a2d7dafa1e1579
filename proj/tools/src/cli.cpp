#include "bclust/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <thread>

#include "bclust/candidates.hpp"
#include "bclust/errors.hpp"
#include "bclust/kcenter.hpp"
#include "bclust/kmedian.hpp"
#include "bclust/oracle.hpp"

namespace bclust::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kOracleMaxPoints = 12;
constexpr std::size_t kOracleMaxK = 3;

std::size_t worker_count(std::size_t threads) {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

json center_json(const CenterRef& c) {
  if (const auto* idx = std::get_if<std::size_t>(&c)) return *idx;
  return std::get<std::vector<double>>(c);
}

json diagnostics_json(const Diagnostics& d) {
  json out{{"candidates", d.candidates},
           {"tuples_total", d.tuples_total},
           {"tuples_evaluated", d.tuples_evaluated},
           {"tuples_pruned", d.tuples_pruned},
           {"radius_probes", d.radius_probes},
           {"fallbacks", d.fallbacks},
           {"degenerate", d.degenerate},
           {"chosen_tuple", d.chosen_tuple},
           {"regions", d.regions},
           {"levels", d.levels},
           {"rounding_steps", d.rounding_steps}};
  if (d.radius) out["radius"] = *d.radius;
  if (d.lp_objective) out["lp_objective"] = *d.lp_objective;
  if (d.epsilon) out["epsilon"] = *d.epsilon;
  if (d.candidate_cost) out["candidate_cost"] = *d.candidate_cost;
  if (!d.per_tuple.empty()) {
    json rows = json::array();
    for (const auto& t : d.per_tuple) {
      // Tuples abandoned by pruning carry an infinite value.
      if (std::isfinite(t.value)) rows.push_back({{"tuple", t.tuple}, {"value", t.value}});
      else rows.push_back({{"tuple", t.tuple}, {"pruned", true}});
    }
    out["per_tuple"] = std::move(rows);
  }
  return out;
}

json oracle_json(const DistanceOracle& oracle, const RunConfig& config,
                 const BalanceBounds& bounds, double value) {
  if (oracle.size() > kOracleMaxPoints || config.k > kOracleMaxK) {
    std::ostringstream why;
    why << "needs n <= " << kOracleMaxPoints << " and k <= " << kOracleMaxK;
    return {{"skipped", why.str()}};
  }
  const bool continuous = oracle.kind() == DistanceOracle::Kind::euclidean &&
                          config.objective != Objective::median;
  const auto mode = continuous ? oracle::CenterMode::continuous : oracle::CenterMode::discrete;
  const auto best = oracle::brute_force_optimum(oracle, config.k, bounds, config.objective, mode);
  json out{{"mode", continuous ? "continuous" : "discrete"}, {"cost", best.cost}};
  if (best.cost > 0) out["ratio"] = value / best.cost;
  else out["ratio"] = value == 0 ? json(1.0) : json(nullptr);
  return out;
}

void write_document(const json& doc, const RunConfig& config, std::ostream& out) {
  if (config.output.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(config.output);
  if (!file) throw InputError("output: cannot open '" + config.output + "' for writing");
  file << doc.dump(2) << '\n';
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InfeasibleBoundsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace

BalanceBounds resolve_bounds(const RunConfig& config, std::size_t n) {
  if (config.k == 0) throw InputError("k: must be >= 1");
  if (config.k > n) {
    std::ostringstream msg;
    msg << "k: " << config.k << " exceeds the number of points n = " << n;
    throw InputError(msg.str());
  }
  BalanceBounds bounds{config.lower.value_or(n / config.k),
                       config.upper.value_or((n + config.k - 1) / config.k)};
  bounds.validate(n, config.k);
  return bounds;
}

ClusteringResult solve(const DistanceOracle& oracle, const RunConfig& config) {
  const BalanceBounds bounds = resolve_bounds(config, oracle.size());
  const std::size_t threads = worker_count(config.threads);
  if (!(config.epsilon > 0)) throw InputError("epsilon: must be > 0");
  if (config.first_index && *config.first_index >= oracle.size())
    throw InputError("first-index: out of range");

  if (config.objective == Objective::center) {
    if (config.generator == Generator::bicriteria)
      throw InputError("generator: center objective uses the gonzalez generator");
    KCenterOptions opts;
    opts.k = config.k;
    opts.bounds = bounds;
    opts.first_index = config.first_index;
    opts.seed = config.seed;
    opts.threads = threads;
    opts.record_per_tuple = config.emit_diagnostics;
    return solve_kbcenter(oracle, opts);
  }

  BalancedOptions opts;
  opts.k = config.k;
  opts.bounds = bounds;
  opts.objective = config.objective;
  opts.lp.epsilon = config.epsilon;
  opts.threads = threads;
  opts.record_per_tuple = config.emit_diagnostics;
  if (config.generator.value_or(Generator::bicriteria) == Generator::gonzalez) {
    auto gen = gonzalez_generator(oracle, config.k, config.first_index.value_or(0));
    return solve_balanced(oracle, opts, gen);
  }
  auto gen = bicriteria_generator(oracle, config.k, config.seed, config.objective,
                                  config.bicriteria_factor);
  return solve_balanced(oracle, opts, gen);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.input.empty()) throw InputError("input: no path given");
    const DistanceOracle oracle = io::load(config.input, config.format, config.header);
    const BalanceBounds bounds = resolve_bounds(config, oracle.size());

    const auto start = std::chrono::steady_clock::now();
    const ClusteringResult result = solve(oracle, config);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    json doc{{"schema", 1},
             {"objective", std::string(to_string(result.objective))},
             {"n", oracle.size()},
             {"k", config.k},
             {"bounds", {{"lower", bounds.lower}, {"upper", bounds.upper}}},
             {"seed", config.seed}};
    if (config.objective != Objective::center) doc["epsilon"] = config.epsilon;
    json centers = json::array();
    for (const auto& c : result.centers) centers.push_back(center_json(c));
    doc["centers"] = std::move(centers);
    doc["value"] = result.value;
    doc["sizes"] = result.assignment.sizes();
    if (config.emit_assignment) doc["labels"] = result.assignment.labels();
    if (config.emit_diagnostics) doc["diagnostics"] = diagnostics_json(result.diagnostics);
    if (config.compare_oracle) doc["oracle"] = oracle_json(oracle, config, bounds, result.value);
    doc["wall_time"] = elapsed.count();
    write_document(doc, config, out);
    return kExitOk;
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced k-center / k-median / k-means clustering"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string format = "csv-points";
  std::string objective = "center";
  std::string generator;
  auto* run_cmd = app.add_subcommand("run", "Cluster one input file");
  run_cmd->add_option("--input", rc.input, "Input path")->required();
  run_cmd->add_option("--format", format, "csv-points | json-points | csv-matrix");
  run_cmd->add_flag("--header", rc.header, "Skip the first CSV line");
  run_cmd->add_option("--objective", objective, "center | median | means");
  run_cmd->add_option("--k", rc.k, "Number of clusters")->required();
  run_cmd->add_option("--lower", rc.lower, "Minimum cluster size (default floor(n/k))");
  run_cmd->add_option("--upper", rc.upper, "Maximum cluster size (default ceil(n/k))");
  run_cmd->add_option("--epsilon", rc.epsilon, "Ring growth factor for median/means");
  run_cmd->add_option("--seed", rc.seed, "Seed for all randomness");
  run_cmd->add_option("--first-index", rc.first_index, "Start of the farthest-point traversal");
  run_cmd->add_option("--generator", generator, "gonzalez | bicriteria");
  run_cmd->add_option("--bicriteria-factor", rc.bicriteria_factor, "Draws per cluster");
  run_cmd->add_option("--output", rc.output, "Write JSON here instead of stdout");
  run_cmd->add_flag("--emit-assignment", rc.emit_assignment, "Include per-point labels");
  run_cmd->add_flag("--emit-diagnostics", rc.emit_diagnostics, "Include solver diagnostics");
  run_cmd->add_flag("--compare-oracle", rc.compare_oracle,
                    "Compare against the brute-force optimum (n <= 12, k <= 3)");
  run_cmd->add_option("--threads", rc.threads, "Worker threads (0 = all cores)");

  BenchConfig bc;
  std::vector<std::string> bench_objectives{"center"};
  std::string bench_output;
  auto* bench_cmd = app.add_subcommand("bench", "Time the solvers over a sweep of n");
  bench_cmd->add_option("--n", bc.sizes, "Point counts")->delimiter(',');
  bench_cmd->add_option("--d", bc.dim, "Dimension");
  bench_cmd->add_option("--k", bc.k, "Number of clusters");
  bench_cmd->add_option("--objective", bench_objectives, "Objectives")->delimiter(',');
  bench_cmd->add_option("--epsilon", bc.epsilon, "Ring growth factor");
  bench_cmd->add_option("--seed", bc.seed, "Seed for data and sampling");
  bench_cmd->add_option("--bicriteria-factor", bc.bicriteria_factor, "Draws per cluster");
  bench_cmd->add_option("--repeats", bc.repeats, "Runs per row; the fastest is reported");
  bench_cmd->add_option("--threads", bc.threads, "Worker threads");
  bench_cmd->add_option("--output", bench_output, "Write CSV here instead of stdout");

  std::string fixture_name;
  double delta = 0.1, l = 1, r = 1, h = 100;
  std::size_t groups = 3, size = 2, dim = 2;
  std::string fixture_output;
  auto* fixture_cmd = app.add_subcommand("fixture", "Export a reference instance as CSV");
  fixture_cmd->add_option("--name", fixture_name, "tightness | seed-set | planted")->required();
  fixture_cmd->add_option("--delta", delta, "tightness: offset in (0, 1)");
  fixture_cmd->add_option("--spacing", l, "seed-set: vertical spacing l");
  fixture_cmd->add_option("--half-gap", r, "seed-set: half the right pair's gap r");
  fixture_cmd->add_option("--offset", h, "seed-set: horizontal offset h");
  fixture_cmd->add_option("--groups", groups, "planted: number of groups");
  fixture_cmd->add_option("--size", size, "planted: points per group");
  fixture_cmd->add_option("--dim", dim, "planted: dimension");
  fixture_cmd->add_option("--output", fixture_output, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (*run_cmd) {
    return guarded(err, [&] {
      rc.format = io::parse_format(format);
      rc.objective = parse_objective(objective);
      if (generator == "gonzalez") rc.generator = Generator::gonzalez;
      else if (generator == "bicriteria") rc.generator = Generator::bicriteria;
      else if (!generator.empty())
        throw InputError("generator: expected gonzalez or bicriteria, got '" + generator + "'");
      return run(rc, out, err);
    });
  }

  if (*bench_cmd) {
    return guarded(err, [&] {
      bc.objectives.clear();
      for (const auto& name : bench_objectives) bc.objectives.push_back(parse_objective(name));
      const auto rows = run_bench(bc);
      if (bench_output.empty()) {
        write_bench_csv(out, rows);
      } else {
        std::ofstream file(bench_output);
        if (!file) throw InputError("output: cannot open '" + bench_output + "'");
        write_bench_csv(file, rows);
      }
      return kExitOk;
    });
  }

  return guarded(err, [&] {
    oracle::Fixture f;
    if (fixture_name == "tightness") f = oracle::tightness_fixture(delta);
    else if (fixture_name == "seed-set") f = oracle::seed_set_fixture(l, r, h);
    else if (fixture_name == "planted") f = oracle::planted_fixture(groups, size, dim);
    else throw InputError("name: unknown fixture '" + fixture_name + "'");
    std::ofstream file(fixture_output);
    if (!file) throw InputError("output: cannot open '" + fixture_output + "'");
    io::write_points_csv(file, f.points);
    json meta{{"schema", 1},
              {"name", f.name},
              {"n", f.points.size()},
              {"k", f.k},
              {"lower", f.bounds.lower},
              {"upper", f.bounds.upper}};
    if (f.first_index) meta["first_index"] = *f.first_index;
    if (f.optimum_radius) meta["optimum_radius"] = *f.optimum_radius;
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

}  // namespace bclust::cli
