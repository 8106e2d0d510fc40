#include "fbasis/cli.hpp"
#include "fbasis/report.hpp"
#include "fbasis/syntax.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace fbasis;

namespace {

RunResult run(std::vector<std::string> args) {
  std::vector<const char*> argv{"fbasis"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_command(parse_args(static_cast<int>(argv.size()), argv.data()));
}

Json run_json(std::vector<std::string> args, int expected_exit) {
  const RunResult r = run(std::move(args));
  EXPECT_EQ(r.exit_code, expected_exit) << r.report;
  return Json::parse(r.report);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, CheckAdmissible) {
  const Json j = run_json({"check-admissible", "--seq", "pow(1,0.5)", "--filter", "statistical", "--p", "2"}, 0);
  EXPECT_EQ(j["verdict"]["kind"], "Proved");
  const Json r = run_json({"check-admissible", "--seq", "pow(1,1)", "--filter", "statistical", "--p", "2"}, 1);
  EXPECT_EQ(r["verdict"]["kind"], "Refuted");
  // the witness text parses back
  EXPECT_NO_THROW(parse_set_expr(r["verdict"]["witness"].get<std::string>()));
}

TEST(Cli, BuildBasis) {
  const Json j = run_json(
      {"build-basis", "--seq", "const(2)", "--space", "l1", "--filter", "summable(const(0.5))", "--n-max", "4"}, 0);
  EXPECT_EQ(j["system"]["coefficients"], Json({"1", "1/2", "3/4", "9/8"}));
  EXPECT_EQ(j["remainders"][1]["value"], "3");
  const Json bad = run_json({"build-basis", "--seq", "pow(1,1)", "--space", "l2", "--filter", "statistical"}, 1);
  EXPECT_EQ(bad["error"]["type"], "NotAdmissible");
}

TEST(Cli, ClassifyAndDominates) {
  EXPECT_EQ(run_json({"classify-set", "--set", "residue(2,0)", "--filter", "statistical"}, 0)["class"], "Stationary");
  EXPECT_EQ(run_json({"dominates", "--filter", "statistical", "--other", "summable(pow(1,-1))"}, 0)["verdict"]["kind"],
            "Proved");
  EXPECT_EQ(run_json({"dominates", "--filter", "frechet", "--other", "statistical"}, 1)["verdict"]["kind"], "Refuted");
}

TEST(Cli, WitnessSeparateProfile) {
  const Json w = run_json({"witness", "--seq", "pow(1,2)", "--filter", "summable(pow(1,-1))"}, 1);
  EXPECT_EQ(w["blocks"]["blocks"][0]["runs"][0], Json({3, 7}));
  run_json({"witness", "--seq", "const(2)", "--filter", "summable(pow(1,-1))"}, 0);
  const Json s = run_json({"separate", "--seq", "const(2)"}, 1);
  EXPECT_EQ(s["cluster"]["m"], 2);
  EXPECT_TRUE(run_json({"separate", "--seq", "pow(1,2)"}, 0)["separator"]["identity_holds"].get<bool>());
  const Json p = run_json({"profile-lemma1", "--seq", "const(1)", "--vector", "unit(1)", "--grid", "1,10"}, 0);
  EXPECT_EQ(p["table"]["rows"].size(), 2u);
}

TEST(Cli, ErrorsMapToExitCodes) {
  EXPECT_EQ(run({"classify-set", "--set", "residue(2,2)"}).exit_code, 65);
  EXPECT_EQ(run({"classify-set"}).exit_code, 64);
  EXPECT_THROW(run({"lemma"}), UsageError);
  EXPECT_EQ(run({"profile-lemma1", "--seq", "pow(1,2)"}).exit_code, 65);
  EXPECT_THROW(run({"classify-set", "--bogus"}), UsageError);
}

TEST(Cli, CsvTable) {
  const RunResult r = run({"profile-lemma1", "--seq", "const(1)", "--grid", "1,10", "--format", "csv"});
  EXPECT_EQ(r.report.substr(0, 6), "n,A,B\n");
  const RunResult kv = run({"classify-set", "--set", "residue(2,0)", "--format", "csv"});
  EXPECT_NE(kv.report.find("class,Stationary\n"), std::string::npos);
}

TEST(Cli, ConfigPrecedence) {
  const auto path = temp_file("fbasis_test.conf", "# test\nseq = pow(1,1)\nfilter = statistical\np = 2\nhorizon = 777\n");
  const char* argv[] = {"fbasis", "check-admissible", "--config", path.c_str(), "--p", "1"};
  const RunConfig c = parse_args(6, argv);
  EXPECT_EQ(c.seq, "pow(1,1)");
  EXPECT_EQ(c.p, "1");
  EXPECT_EQ(c.horizon, 777u);
  const auto bad = temp_file("fbasis_bad.conf", "nope = 1\n");
  const char* argv2[] = {"fbasis", "check-admissible", "--config", bad.c_str()};
  EXPECT_THROW(parse_args(4, argv2), UsageError);
}

TEST(Cli, HorizonFromEnvironment) {
  ::setenv("FBASIS_HORIZON", "4321", 1);
  const char* argv[] = {"fbasis", "classify-set"};
  EXPECT_EQ(parse_args(2, argv).horizon, 4321u);
  const char* argv2[] = {"fbasis", "classify-set", "--horizon", "99"};
  EXPECT_EQ(parse_args(4, argv2).horizon, 99u);
  ::unsetenv("FBASIS_HORIZON");
}

TEST(Cli, BinaryExitCodes) {
  const std::string cli = FBASIS_CLI_PATH;
  auto code = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(code("classify-set --set 'residue(2,0)' --filter statistical"), 0);
  EXPECT_EQ(code("check-admissible --seq 'pow(1,1)' --filter statistical --p 2"), 1);
  EXPECT_EQ(code("nonsense"), 64);
  EXPECT_EQ(code("classify-set --set 'residue(2,0)' --output /nonexistent/dir/out.json"), 74);
}

TEST(Report, Numbers) {
  EXPECT_EQ(num(Rational(3, 4)), "3/4");
  EXPECT_EQ(num(0.1), "0.10000000000000001");
  EXPECT_EQ(num(Scalar::from_square(2)), "sqrt(2)");
}
