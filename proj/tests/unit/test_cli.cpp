#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "schema.hpp"

using geoconn::support::CommandResult;
using geoconn::support::run_command;
using nlohmann::json;

namespace {

CommandResult cli(const std::string& args) { return run_command(std::string(GEOCONN_CLI) + " " + args); }

json schema(const std::string& name) {
  return geoconn::support::load_json(std::string(GEOCONN_SCHEMA_DIR) + "/" + name + ".schema.json");
}

void expect_valid(const std::string& schema_name, const std::string& text) {
  json doc;
  ASSERT_NO_THROW(doc = json::parse(text)) << text.substr(0, 200);
  const auto errors = geoconn::support::validate(schema(schema_name), doc);
  for (const auto& e : errors) ADD_FAILURE() << schema_name << ": " << e;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(cli("--help").exit_code, 0);
  EXPECT_EQ(cli("connect --help").exit_code, 0);
}

TEST(Cli, ModelsListsBuiltins) {
  const auto r = cli("models");
  ASSERT_EQ(r.exit_code, 0);
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 8u);
  EXPECT_EQ(ls[0], "name,dim,signature,chart,oracle");
  for (const char* name : {"euclidean", "minkowski", "sphere2", "hyperbolic2", "desitter",
                           "paraboloid", "clifton_pohl"}) {
    EXPECT_NE(r.out.find(std::string("\n") + name + ","), std::string::npos) << name;
  }
  const auto j = cli("models --format json");
  ASSERT_EQ(j.exit_code, 0);
  expect_valid("models", j.out);
}

TEST(Cli, ExpOnTheSphere) {
  const auto r = cli("exp --model sphere2 --point 1.5707963,0 --vec 0,3.1415926");
  ASSERT_EQ(r.exit_code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], "x1,x2");
  double a = 0, b = 0;
  ASSERT_EQ(std::sscanf(ls[1].c_str(), "%lf,%lf", &a, &b), 2);
  EXPECT_NEAR(a, 1.5707963, 1e-6);
  EXPECT_NEAR(b, 3.1415926, 1e-6);
  const auto j = cli("exp --model sphere2 --point pi/2,0 --vec 0,1 --format json");
  ASSERT_EQ(j.exit_code, 0);
  expect_valid("exp", j.out);
}

TEST(Cli, ConnectEuclidean) {
  const auto r = cli("connect --model euclidean --dim 2 --from 0,0 --to 3,4 --json");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "{\"status\":\"Connected\",\"v\":[3,4]}\n");
  expect_valid("connect-compact", r.out);
  const auto full = cli("connect --model sphere2 --from 1.5,0 --to 1,2.5 --format json");
  ASSERT_EQ(full.exit_code, 0);
  expect_valid("connect", full.out);
  const auto text = cli("connect --model sphere2 --from 1.5,0 --to 1,2.5");
  EXPECT_NE(text.out.find("Connected"), std::string::npos);
}

TEST(Cli, ConnectFailureIsExitTwoWithWitness) {
  const auto r = cli("connect --model desitter --from 0,0 --to pi-0.3,1.4 --json");
  EXPECT_EQ(r.exit_code, 2);
  expect_valid("connect-compact", r.out);
  const auto j = json::parse(r.out);
  EXPECT_NE(j["status"], "Connected");
  EXPECT_TRUE(j.contains("witness"));
}

TEST(Cli, ConnectPathOptions) {
  EXPECT_EQ(cli("connect --model sphere2 --from 1.5,0 --to 1,2.5 --path aux --json").exit_code, 0);
  EXPECT_EQ(cli("connect --model sphere2 --from 1.5,0 --to 1,2.5 --path polyline --via "
                "\"2,1;1.4,2\" --json")
                .exit_code,
            0);
  EXPECT_EQ(cli("connect --model sphere2 --from 1.5,0 --to 1,2.5 --path bogus").exit_code, 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("connect --model nosuch --from 0 --to 1").exit_code, 3);
  EXPECT_EQ(cli("connect --model euclidean --dim 2 --from 0,0").exit_code, 1);
  EXPECT_EQ(cli("frobnicate").exit_code, 1);
  EXPECT_EQ(cli("exp --model euclidean --dim 2 --point 0,0 --vec 1").exit_code, 1);
  EXPECT_EQ(cli("exp --model sphere2 --point 0,0 --vec 1,0").exit_code, 3);
  EXPECT_EQ(cli("exp --model clifton_pohl --point 1,0 --vec 5,0").exit_code, 2);
  EXPECT_EQ(cli("probe --kind convex --model euclidean --dim 2 --f \"x1 +\"").exit_code, 1);
  EXPECT_EQ(cli("probe --kind gauss --model minkowski --dim 2").exit_code, 3);
  EXPECT_EQ(cli("probe --kind weakproper --model paraboloid --exp oracle").exit_code, 3);
  EXPECT_EQ(cli("models --config /nonexistent/file.conf").exit_code, 0);
  EXPECT_EQ(cli("exp --config /nonexistent/file.conf --point 0 --vec 1").exit_code, 3);
}

TEST(Cli, ShootIsDeterministicAndValid) {
  const std::string args = "shoot --model paraboloid --point 0.3,0.1 --vec 1,0.5 --t-max 3";
  const auto a = cli(args), b = cli(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out)[0], "t,x1,x2,v1,v2");
  const auto j = cli(args + " --format json");
  expect_valid("shoot", j.out);
}

TEST(Cli, ConjLocusIsDeterministicAcrossThreadCounts) {
  const std::string args = "conj-locus --model sphere2 --point 1.2,0.3 --count 16 --format json";
  const auto a = run_command(std::string("GEO_THREADS=1 ") + GEOCONN_CLI + " " + args);
  const auto b = run_command(std::string("GEO_THREADS=3 ") + GEOCONN_CLI + " " + args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  expect_valid("conj-locus", a.out);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["locus"]["clusters"].size(), 1u);
  const auto csv = cli("conj-locus --model desitter --point 0,0 --count 8 --causal timelike");
  ASSERT_EQ(csv.exit_code, 0);
  EXPECT_GT(lines(csv.out).size(), 1u);
}

TEST(Cli, ProbeOutputsMatchSchemas) {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"probe-weakproper",
       "probe --kind weakproper --model desitter --family hyperboloid --causal spacelike"},
      {"probe-weakproper", "probe --kind weakproper --model minkowski --dim 3 --aux-norm"},
      {"probe-disprison", "probe --kind disprison --model clifton_pohl --count 8"},
      {"probe-pseudoconvex", "probe --kind pseudoconvex --model euclidean --dim 2 --box 0,0:1,1 "
                             "--count 8"},
      {"probe-convex", "probe --kind convex --model euclidean --dim 3 --f \"-(x1^2+x2^2+x3^2)\" "
                       "--count 20"},
      {"probe-convex", "convex-check --model euclidean --dim 3 --f \"x1^2\" --count 20"},
      {"probe-gauss", "probe --kind gauss --model sphere2 --count 8 --r-max 3"},
  };
  for (const auto& [name, args] : runs) {
    const auto a = cli(args), b = cli(args);
    ASSERT_EQ(a.exit_code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
    SCOPED_TRACE(args);
    expect_valid(name, a.out);
  }
}

TEST(Cli, DeSitterSweepReportsViolation) {
  const auto r =
      cli("probe --kind weakproper --model desitter --family hyperboloid --causal spacelike");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"]["summary"], "Violation");
  EXPECT_EQ(j["verdict"]["exp_evaluation"], "oracle");
  EXPECT_TRUE(j["verdict"]["witness"].is_string());
}

TEST(Cli, ProbeCsvFlattensVectors) {
  const auto r = cli("probe --kind gauss --model euclidean --dim 2 --count 2 --format csv");
  ASSERT_EQ(r.exit_code, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "r,s,radial_norm,cross,skipped");
}

TEST(Cli, OutputFileOption) {
  const auto path = std::filesystem::temp_directory_path() / "geoconn_cli_out.csv";
  std::filesystem::remove(path);
  const auto r = cli("exp --model euclidean --dim 2 --point 1,1 --vec 1,2 --output " + path.string());
  ASSERT_EQ(r.exit_code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto ls = lines(ss.str());
  ASSERT_EQ(ls.size(), 2u);
  double a = 0, b = 0;
  ASSERT_EQ(std::sscanf(ls[1].c_str(), "%lf,%lf", &a, &b), 2);
  EXPECT_NEAR(a, 2.0, 1e-12);
  EXPECT_NEAR(b, 3.0, 1e-12);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigFileModel) {
  const auto path = std::filesystem::temp_directory_path() / "geoconn_halfplane.conf";
  {
    std::ofstream out(path);
    out << "# hyperbolic upper half plane\n[manifold]\ntype = dsl\nname = halfplane\ndim = 2\n"
           "signature = +,+\ng_1_1 = \"1 / x2^2\"\ng_2_2 = \"1 / x2^2\"\n"
           "lower = -inf, 0.001\nupper = inf, inf\n";
  }
  const auto r = cli("exp --config " + path.string() + " --point 0,1 --vec 0,1");
  ASSERT_EQ(r.exit_code, 0);
  double a = 1, b = 0;
  ASSERT_EQ(std::sscanf(lines(r.out)[1].c_str(), "%lf,%lf", &a, &b), 2);
  EXPECT_NEAR(a, 0.0, 1e-9);
  EXPECT_NEAR(b, std::exp(1.0), 1e-6);

  std::ofstream(path) << "[manifold]\ntype = dsl\nname = bad\ndim = 2\nsignature = +,+\n"
                         "g_1_1 = \"1 +\"\ng_2_2 = \"1\"\n";
  EXPECT_EQ(cli("exp --config " + path.string() + " --point 0,1 --vec 0,1").exit_code, 3);
  std::filesystem::remove(path);
}
