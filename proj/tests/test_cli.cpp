#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "cqmorph/format.hpp"
#include "cqmorph/io.hpp"
#include "json.hpp"

namespace cqmorph {
namespace {

const std::string kFixtures = CQMORPH_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "cqmorph");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("cqmorph_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(CliDivergence, EmbeddedDiagonalHasZeroGap) {
  const CliRun r = run({"divergence", fixture("commuting.json"), "--fn", "power:0.5,resolvent:1,square,power:0.9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"label", "classical", "quantum", "gap"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::abs(parse_real(rows[i][3])), 1e-12);
  EXPECT_NEAR(parse_real(rows[2][2]), 0.520833, 1e-6);
}

TEST(CliDivergence, PowerOneColumns) {
  const CliRun r = run({"divergence", fixture("undetermined.json"), "--fn", "power:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(r.out);
  EXPECT_NEAR(parse_real(rows[1][1]), -1.0, 1e-12);
  EXPECT_NEAR(parse_real(rows[1][2]), -1.0, 1e-12);
}

TEST(CliDivergence, InfinityRendering) {
  const CliRun r = run({"divergence", fixture("pure_target.json"), "--fn", "square", "--csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv(r.out)[1], (std::vector<std::string>{"square", "inf", "inf", "0"}));
}

TEST(CliDivergence, LownerSpecWithCommas) {
  const CliRun r = run({"divergence", fixture("commuting.json"), "--fn",
                        R"(lowner:{"f0":0.3,"alpha":-0.5,"beta":0.25,"measure":[[0.5,1.0],[3,0.7]]},square)"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0].rfind("lowner(", 0), 0u);
  EXPECT_LE(std::abs(parse_real(rows[1][3])), 1e-12);
  EXPECT_EQ(rows[2][0], "square");
}

TEST(CliDivergence, Errors) {
  EXPECT_EQ(run({"divergence", fixture("commuting.json"), "--fn", "cube"}).code, cli::kExitUsage);
  const CliRun r = run({"divergence", fixture("commuting.json"), "--fn", "power4"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("operator convex"), std::string::npos);
  EXPECT_EQ(run({"divergence", fixture("missing.json")}).code, cli::kExitUsage);
}

TEST(CliCheck, PureTargetFixture) {
  const CliRun r = run({"check", fixture("pure_target.json")});
  EXPECT_EQ(r.code, cli::kExitFeasible) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["stage"], "pure-target");
  EXPECT_EQ(j["status"], "Feasible");
  EXPECT_TRUE(j.contains("channel"));
}

TEST(CliCheck, CounterexampleFixture) {
  const CliRun r = run({"check", fixture("counterexample.json")});
  EXPECT_EQ(r.code, cli::kExitInfeasible) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["stage"], "oracle");
  EXPECT_EQ(j["scan"]["violations"], 0);
}

TEST(CliCheck, UndeterminedFixture) {
  const CliRun r = run({"check", fixture("undetermined.json")});
  EXPECT_EQ(r.code, cli::kExitUndetermined) << r.out;
  // The iteration cap comes from the instance config; lifting it decides.
  EXPECT_EQ(run({"check", fixture("undetermined.json"), "--max-iter", "20000"}).code, cli::kExitFeasible);
}

TEST(CliCheck, Modes) {
  EXPECT_EQ(run({"check", fixture("uniform_source.json"), "--mode", "scan"}).code, cli::kExitInfeasible);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--mode", "scan"}).code, cli::kExitUndetermined);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--mode", "equality"}).code, cli::kExitFeasible);
  EXPECT_EQ(run({"check", fixture("uniform_source.json"), "--mode", "equality"}).code, cli::kExitUndetermined);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--mode", "corollary"}).code, cli::kExitFeasible);
  EXPECT_EQ(run({"check", fixture("uniform_source.json"), "--mode", "corollary"}).code, cli::kExitUndetermined);
  const CliRun csv = run({"check", fixture("commuting.json"), "--mode", "scan", "--csv"});
  EXPECT_EQ(read_csv(csv.out)[0], (std::vector<std::string>{"label", "lhs", "rhs", "gap", "violated"}));
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--mode", "bogus"}).code, cli::kExitUsage);
}

TEST(CliCheck, GlobalFlags) {
  const CliRun r = run({"check", fixture("commuting.json"), "--mode", "scan", "--csv", "--t-grid", "0.1:10:3",
                     "--s-grid", "0.5:0.9:2"});
  ASSERT_EQ(r.code, cli::kExitUndetermined) << r.err;
  // resolvent:0, 3 resolvents, 2 powers, power:1, square.
  EXPECT_EQ(read_csv(r.out).size(), 1u + 8u);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--t-grid", "0:1:3"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--json", "--csv"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"check", fixture("commuting.json"), "--tol", "-1"}).code, cli::kExitUsage);
}

TEST(CliCheck, IoErrors) {
  EXPECT_EQ(run({"check", fixture("truncated.json")}).code, cli::kExitUsage);
  const CliRun r = run({"check", fixture("malformed_field.json")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("sigma0[1][1][0]"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliReverseTest, CommutingFixture) {
  const CliRun r = run({"reverse-test", fixture("commuting.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["residue_symbol"].is_null());
  EXPECT_LT(j["residual"].get<double>(), 1e-9);
  const CliRun pure = run({"reverse-test", fixture("pure_target.json"), "--csv"});
  const auto rows = read_csv(pure.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[2][0], "residue");
}

TEST(CliCounterexample, DefaultTriple) {
  const std::string curves = temp_path("curves.csv");
  const std::string summary = temp_path("summary.json");
  const CliRun r = run({"counterexample", "--out", curves, "--summary", summary});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(summary));
  EXPECT_GT(j["b_star"].get<double>(), 0.6);
  EXPECT_EQ(j["oracles"]["majorization"], "Infeasible");
  EXPECT_EQ(j["oracles"]["lp"], "Infeasible");
  EXPECT_EQ(j["oracles"]["scan_violations"], 0);
  EXPECT_EQ(slurp(summary), r.out);
  const auto rows = read_csv(slurp(curves));
  EXPECT_EQ(rows.size(), 1u + 97u + 1u);
  std::filesystem::remove(curves);
  std::filesystem::remove(summary);
}

TEST(CliCounterexample, UniformTripleRejected) {
  EXPECT_EQ(run({"counterexample", "--triple", "0.3333333333333333,0.3333333333333333,0.3333333333333334"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"counterexample", "--triple", "0.1,0.3"}).code, cli::kExitUsage);
}

TEST(CliCounterexample, RefinementNonIncreasing) {
  const auto coarse = nlohmann::json::parse(run({"counterexample", "--t-grid", "0.01:100:5"}).out);
  const auto fine = nlohmann::json::parse(run({"counterexample", "--t-grid", "0.001:10000:200"}).out);
  EXPECT_LE(fine["b_star"].get<double>(), coarse["b_star"].get<double>());
}

TEST(CliJensen, QuarticAndSquare) {
  const auto q = nlohmann::json::parse(run({"jensen", "--fn", "power4", "--trials", "1000", "--seed", "5"}).out);
  EXPECT_TRUE(q["violation_found"].get<bool>());
  const auto s = nlohmann::json::parse(run({"jensen", "--fn", "square", "--trials", "500"}).out);
  EXPECT_FALSE(s["violation_found"].get<bool>());
  EXPECT_EQ(run({"jensen", "--dims", "4:2"}).code, cli::kExitUsage);
}

TEST(CliDeterminism, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> cmds = {
      {"jensen", "--fn", "power4", "--trials", "200", "--seed", "9"},
      {"counterexample", "--csv"},
      {"check", fixture("undetermined.json"), "--max-iter", "20000"},
      {"divergence", fixture("undetermined.json"), "--json"}};
  for (const auto& c : cmds) {
    const CliRun a = run(c);
    const CliRun b = run(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << c.front();
  }
}

}  // namespace
}  // namespace cqmorph
