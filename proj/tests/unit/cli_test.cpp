#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace sgs::cli {
namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "sgs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sgs_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Oratio, WorkedExample) {
  const Invocation r = run({"oratio", "--sens", "0.40", "--spec", "0.95", "--prev", "0.10", "--ratio", "0.5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["o_ratio"].get<double>(), 3.296443, 1e-6);
  EXPECT_NEAR(j["p_z"].get<double>(), 0.085, 1e-12);
}

TEST(Oratio, CsvAndSurface) {
  const Invocation r = run({"oratio", "--sens", "0.4", "--spec", "0.95", "--csv"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  const Invocation s = run({"oratio", "--sens", "0.4", "--spec", "0.95", "--surface",
                     "0.4:0.5:0.1,0.9:0.95:0.05"});
  ASSERT_EQ(s.code, kOk) << s.err;
  EXPECT_NE(s.out.find("0.400000,0.950000,0.500000,0.100000,3.296443"), std::string::npos);
}

TEST(Oratio, LowSpecificityIsDesignError) {
  const Invocation r = run({"oratio", "--sens", "0.4", "--spec", "0.3"});
  EXPECT_EQ(r.code, kDesign);
  EXPECT_NE(r.err.find("design error"), std::string::npos);
}

TEST(Plan, ExpectedCasesAndInfeasible) {
  const Invocation r = run({"plan", "--budget", "500", "--ratio", "0.75", "--sens", "0.4", "--spec",
                     "0.95", "--prev", "0.1", "--cohort-size", "100000"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["expected_cases"].get<double>(), 184.67, 0.01);
  EXPECT_EQ(j["n_z1"].get<int>(), 375);
  const Invocation bad = run({"plan", "--budget", "12000", "--ratio", "0.75", "--sens", "0.4", "--spec",
                       "0.95", "--prev", "0.1", "--cohort-size", "100000"});
  EXPECT_EQ(bad.code, kDesign);
}

TEST(Usage, BadFlagsExitOne) {
  EXPECT_EQ(run({"oratio", "--sens", "abc", "--spec", "0.9"}).code, kUsage);
  EXPECT_EQ(run({"oratio", "--spec", "0.9"}).code, kUsage);
  EXPECT_EQ(run({"nonsense"}).code, kUsage);
  EXPECT_EQ(run({"evaluate", "--scores", "/nonexistent/file.csv"}).code, kUsage);
  EXPECT_EQ(run({"--help"}).code, kOk);
}

TEST(Pipeline, SimulateSampleEvaluate) {
  const auto cohort = scratch("cohort.csv");
  const Invocation sim = run({"simulate", "--size", "3000", "--features", "40", "--out", cohort.string(),
                       "--seed", "4"});
  ASSERT_EQ(sim.code, kOk) << sim.err;
  EXPECT_TRUE(nlohmann::json::parse(sim.out).contains("realized_prevalence"));

  const Invocation a = run({"sample", "--cohort", cohort.string(), "--design", "sgs", "--n", "200",
                     "--seed", "7", "--csv"});
  const Invocation b = run({"sample", "--cohort", cohort.string(), "--design", "sgs", "--n", "200",
                     "--seed", "7", "--csv"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("unit_id,z,y,weight,design,seed", 0), 0u);

  const auto scores = scratch("scores.csv");
  {
    std::ofstream f(scores);
    f << "truth,score,weight\n1,0.9,1\n1,0.4,2\n0,0.5,1\n0,0.1,2\n";
  }
  const Invocation e = run({"evaluate", "--scores", scores.string()});
  ASSERT_EQ(e.code, kOk) << e.err;
  const auto j = nlohmann::json::parse(e.out);
  EXPECT_DOUBLE_EQ(j["auc"].get<double>(), 0.75);
  EXPECT_NEAR(j["auc_ipw"].get<double>(), 7.0 / 9.0, 1e-12);
}

TEST(Featurize, SyntheticCorpus) {
  const Invocation r = run({"featurize", "--synthetic", "400", "--seed", "2", "--csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string header = r.out.substr(0, r.out.find('\n'));
  EXPECT_EQ(header.rfind("id,label,", 0), 0u);
  EXPECT_NE(header.find("z_surrogate"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 401);
}

}  // namespace
}  // namespace sgs::cli
