#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "conelab/reports.hpp"
#include "conelab/transformations.hpp"
#include "conelab_reproduce/oracles.hpp"

using namespace conelab;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string command = std::string(CONELAB_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t got;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path work_dir() {
  const std::filesystem::path dir(CONELAB_CLI_WORK);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_curve(const std::string& name, const ProfileCurve& curve) {
  const auto path = work_dir() / name;
  std::ofstream out(path);
  write_curve_csv(out, curve);
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ConeNTwo) {
  const CliRun r = run("cone --n 2");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("\"lambda\": 4.93480"), std::string::npos);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["version"], version());
  EXPECT_EQ(doc["command"], "cone");
  EXPECT_EQ(doc["config"]["n"], 2);
  EXPECT_EQ(doc["config"]["levels"], 3);
  const double pi2 = std::numbers::pi * std::numbers::pi / 2;
  EXPECT_NEAR(doc["result"]["closed_form"].get<double>(), pi2, 1e-13);
  EXPECT_NEAR(doc["result"]["solver"]["lambda"].get<double>(), pi2, 1e-6 * pi2);
  EXPECT_NEAR(doc["result"]["cone_ball"]["ratio"].get<double>(), 0.5, 1e-6);
}

TEST(Cli, CertifyNFive) {
  const CliRun r = run("certify --n 5");
  ASSERT_EQ(r.exit_code, 0);
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["result"]["verdict"].get<bool>());
  EXPECT_EQ(doc["config"]["mode"], "assert");
  EXPECT_GT(doc["result"]["lower_sum"].get<double>(), 4.0);
}

TEST(Cli, CertifyLargeNReportsWithoutVerdict) {
  const CliRun r = run("certify --n 6");
  ASSERT_EQ(r.exit_code, 0);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["config"]["mode"], "report");
  EXPECT_EQ(doc["result"]["status"], "failed");
  EXPECT_GT(doc["result"]["first_integral"].get<double>(), 4.0);
  // Asserting outside 2 <= n <= 5 is a precondition error.
  EXPECT_EQ(run("certify --n 6 --mode assert").exit_code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eigen --curve missing.csv").exit_code, 2);
  EXPECT_EQ(run("cone --bogus").exit_code, 1);
  EXPECT_EQ(run("").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
  EXPECT_EQ(run("--help").exit_code, 0);
  EXPECT_EQ(run("roundoff --s 0.1 --delta 0.2").exit_code, 2);
  EXPECT_EQ(run("transform --curve missing.csv").exit_code, 2);
}

TEST(Cli, BesselRootsTable) {
  const CliRun r = run("bessel-roots --nu-max 1");
  ASSERT_EQ(r.exit_code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "nu,j");
  int rows = 0;
  while (std::getline(in, line)) {
    const double nu = std::stod(line.substr(0, line.find(',')));
    const double j = std::stod(line.substr(line.find(',') + 1));
    const double expected =
        oracle::bisect([nu](double x) { return std::cyl_bessel_j(nu, x); }, nu + 1.0, nu + 3.0);
    EXPECT_NEAR(j, expected, 1e-12) << nu;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, IdenticalRunsGiveIdenticalJson) {
  const CliRun a = run("perturb --n 3 --s 0.1,0.2");
  const CliRun b = run("perturb --n 3 --s 0.1,0.2");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  const Json doc = Json::parse(a.out);
  EXPECT_EQ(doc["result"]["s"].size(), 3u);
  EXPECT_EQ(doc["result"]["dini_bound"][0], "nan");
}

TEST(Cli, PerturbCsv) {
  const CliRun r = run("perturb --n 2 --s 0.1 --format csv");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "s,lambda,error_bar,dini_bound,margin");
}

TEST(Cli, EigenOfACurveFile) {
  const std::string path = write_curve("cone.csv", cone_curve(BoundaryOrbit(2, 1.0, 1.0), 64));
  const CliRun r = run("eigen --curve " + path + " --n 2");
  ASSERT_EQ(r.exit_code, 0);
  const Json doc = Json::parse(r.out);
  const double pi2 = std::numbers::pi * std::numbers::pi / 2;
  EXPECT_NEAR(doc["result"]["lambda"].get<double>(), pi2, 1e-6 * pi2);
  EXPECT_EQ(doc["config"]["curve"], path);
  const CliRun csv = run("eigen --curve " + path + " --n 2 --format csv");
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "t,phi");
}

TEST(Cli, TransformWritesCurveAndOmitsTimings) {
  const std::string path = write_curve("random.csv", random_curve(3, 1));
  const std::string out = (work_dir() / "canonical.csv").string();
  const CliRun r = run("transform --curve " + path + " --n 2 --p 3 --curve-out " + out);
  ASSERT_EQ(r.exit_code, 0);
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["result"]["non_decreasing"].get<bool>());
  EXPECT_FALSE(doc["result"].contains("timing"));
  std::ifstream in(out);
  const ProfileCurve canonical = read_curve_csv(in);
  EXPECT_TRUE(is_r_monotone(canonical));
  const CliRun timed = run("transform --curve " + path + " --n 2 --p 3 --timing");
  EXPECT_TRUE(Json::parse(timed.out)["result"].contains("timing"));
  // p < 2n - 1 is rejected.
  EXPECT_EQ(run("transform --curve " + path + " --n 3 --p 3").exit_code, 2);
}

TEST(Cli, OptimizeWritesTraceAndCurve) {
  const auto trace = work_dir() / "trace.jsonl";
  const auto curve = work_dir() / "best.csv";
  const CliRun r = run("optimize --n 2 --p 2 --x0 1 --y0 1 --restarts 2 --evaluations 60 --nodes 64 --trace " +
                    trace.string() + " --curve-out " + curve.string());
  ASSERT_EQ(r.exit_code, 0);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["result"]["reference"], "cone");
  EXPECT_GT(doc["result"]["margin"].get<double>(), 0.0);
  std::istringstream lines(slurp(trace));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const Json entry = Json::parse(line);
    EXPECT_EQ(entry["knots"].size(), 12u);
    ++count;
  }
  EXPECT_EQ(count, doc["result"]["optimizer"]["trace_lines"].get<std::size_t>());
  std::ifstream in(curve);
  EXPECT_TRUE(read_curve_csv(in).starts_at(BoundaryOrbit(2, 1.0, 1.0)));
}
