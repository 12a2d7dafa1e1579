#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bclust/cli.hpp"
#include "bclust/oracle.hpp"

namespace bclust::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bclust");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bclust_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name)) << body;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, TightnessFixtureEndToEnd) {
  const auto csv = path("f4.csv");
  auto fx = invoke({"fixture", "--name", "tightness", "--delta", "0.1", "--output", csv});
  ASSERT_EQ(fx.code, 0) << fx.err;
  EXPECT_EQ(json::parse(fx.out)["first_index"], 1);

  auto run = invoke({"run", "--input", csv, "--k", "3", "--lower", "2", "--upper", "2",
                     "--first-index", "1", "--emit-assignment", "--emit-diagnostics",
                     "--compare-oracle"});
  ASSERT_EQ(run.code, 0) << run.err;
  const auto doc = json::parse(run.out);
  EXPECT_EQ(doc["schema"], 1);
  EXPECT_EQ(doc["objective"], "center");
  EXPECT_NEAR(doc["value"].get<double>(), 3.9, 1e-12);
  EXPECT_NEAR(doc["oracle"]["ratio"].get<double>(), 3.9, 1e-9);
  EXPECT_EQ(doc["diagnostics"]["tuples_total"], 27);
  EXPECT_EQ(doc["labels"].size(), 6u);
  EXPECT_TRUE(doc.contains("wall_time"));
}

TEST_F(CliTest, EmittedValueMatchesRecomputation) {
  const auto csv = write("p.csv", "0,0\n1,0\n0,1\n5,5\n6,5\n5,6\n9,0\n9,1\n");
  for (std::string obj : {"center", "median", "means"}) {
    auto run = invoke({"run", "--input", csv, "--k", "2", "--objective", obj,
                       "--emit-assignment", "--seed", "3"});
    ASSERT_EQ(run.code, 0) << run.err;
    const auto doc = json::parse(run.out);
    const PointSet pts(2, {0, 0, 1, 0, 0, 1, 5, 5, 6, 5, 5, 6, 9, 0, 9, 1});
    const auto o = DistanceOracle::euclidean(pts);
    std::vector<CenterRef> centers;
    for (const auto& c : doc["centers"]) {
      if (c.is_number()) centers.emplace_back(c.get<std::size_t>());
      else centers.emplace_back(c.get<std::vector<double>>());
    }
    const BalancedAssignment a(doc["labels"].get<std::vector<std::size_t>>(), 2);
    EXPECT_TRUE(a.within({4, 4}));
    EXPECT_NEAR(evaluate_objective(a, centers, o, parse_objective(obj)),
                doc["value"].get<double>(), 1e-9);
  }
}

TEST_F(CliTest, DeterministicApartFromWallTime) {
  const auto csv = write("p.csv", "0\n1\n2\n10\n11\n12\n20\n21\n22\n");
  const auto out = path("o.json");
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    auto run = invoke({"run", "--input", csv, "--k", "3", "--objective", "median", "--seed",
                       "5", "--emit-diagnostics", "--output", out});
    ASSERT_EQ(run.code, 0) << run.err;
    auto doc = json::parse(std::ifstream(out));
    doc.erase("wall_time");
    if (rep == 0) first = doc.dump();
    else EXPECT_EQ(doc.dump(), first);
  }
}

TEST_F(CliTest, MalformedRowExitsTwoWithRowNumber) {
  const auto csv = write("bad.csv", "1,2\n3,4\n5,oops\n");
  auto run = invoke({"run", "--input", csv, "--k", "1"});
  EXPECT_EQ(run.code, kExitInput);
  EXPECT_NE(run.err.find("row 3"), std::string::npos) << run.err;
}

TEST_F(CliTest, BrokenBoundChainExitsThree) {
  const auto csv = write("p.csv", "0\n1\n2\n3\n");
  auto run = invoke({"run", "--input", csv, "--k", "2", "--lower", "3", "--upper", "3"});
  EXPECT_EQ(run.code, kExitInfeasible);
  EXPECT_NE(run.err.find("1 <= L <= floor(n/k) <= ceil(n/k) <= U <= n"), std::string::npos)
      << run.err;
}

TEST_F(CliTest, InputErrorsExitTwo) {
  const auto csv = write("p.csv", "0\n1\n2\n3\n");
  EXPECT_EQ(invoke({"run", "--input", csv, "--k", "5"}).code, kExitInput);
  EXPECT_EQ(invoke({"run", "--input", csv, "--k", "2", "--objective", "mode"}).code, kExitInput);
  EXPECT_EQ(invoke({"run", "--input", csv, "--k", "2", "--format", "xml"}).code, kExitInput);
  EXPECT_EQ(invoke({"run", "--input", path("missing.csv"), "--k", "2"}).code, kExitInput);
  EXPECT_EQ(invoke({"run", "--k", "2"}).code, kExitInput);
  EXPECT_EQ(invoke({"run", "--input", csv, "--k", "2", "--generator", "bicriteria"}).code,
            kExitInput);
  EXPECT_EQ(invoke({"run", "--input", csv, "--k", "2", "--first-index", "9"}).code, kExitInput);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, MatrixAndJsonInputs) {
  const auto mat = write("m.csv", "0,1,5,6\n1,0,5,6\n5,5,0,1\n6,6,1,0\n");
  auto run = invoke({"run", "--input", mat, "--format", "csv-matrix", "--k", "2",
                     "--objective", "median", "--compare-oracle"});
  ASSERT_EQ(run.code, 0) << run.err;
  auto doc = json::parse(run.out);
  EXPECT_EQ(doc["value"], 2.0);
  EXPECT_EQ(doc["oracle"]["mode"], "discrete");

  const auto js = write("p.json", "[[0,0],[0,1],[8,8],[8,9]]");
  run = invoke({"run", "--input", js, "--format", "json-points", "--k", "2", "--objective",
                "means"});
  ASSERT_EQ(run.code, 0) << run.err;
  // Centers come from the input points, so each pair costs 1.
  EXPECT_NEAR(json::parse(run.out)["value"].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, OracleSkippedAboveSizeGuard) {
  std::string body;
  for (int i = 0; i < 13; ++i) body += std::to_string(i) + "\n";
  const auto csv = write("p.csv", body);
  auto run = invoke({"run", "--input", csv, "--k", "2", "--compare-oracle"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_TRUE(json::parse(run.out)["oracle"].contains("skipped"));
}

TEST_F(CliTest, BenchEmitsHeaderAndRows) {
  auto empty = invoke({"bench"});
  ASSERT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(empty.out, "n,d,k,objective,wall_time,cost\n");

  auto a = invoke({"bench", "--n", "60,120", "--d", "4", "--k", "2", "--objective",
                   "center,median", "--seed", "7"});
  auto b = invoke({"bench", "--n", "60,120", "--d", "4", "--k", "2", "--objective",
                   "center,median", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  std::istringstream sa(a.out), sb(b.out);
  std::string la, lb;
  std::getline(sa, la);
  std::getline(sb, lb);
  int rows = 0;
  while (std::getline(sa, la) && std::getline(sb, lb)) {
    ++rows;
    EXPECT_EQ(la.substr(la.rfind(',')), lb.substr(lb.rfind(',')));
  }
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, FixtureExportRoundTrips) {
  const auto csv = path("f5.csv");
  auto fx = invoke({"fixture", "--name", "seed-set", "--spacing", "1", "--half-gap", "1",
                    "--offset", "100", "--output", csv});
  ASSERT_EQ(fx.code, 0) << fx.err;
  auto run = invoke({"run", "--input", csv, "--k", "3", "--lower", "2", "--upper", "2",
                     "--first-index", "0"});
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_LE(json::parse(run.out)["value"].get<double>(), 4.0);
  EXPECT_EQ(invoke({"fixture", "--name", "seed-set", "--spacing", "3", "--output", csv}).code,
            kExitInput);
  EXPECT_EQ(invoke({"fixture", "--name", "nope", "--output", csv}).code, kExitInput);
}

}  // namespace
}  // namespace bclust::cli
