#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int exit;
  std::string err;
};

int counter = 0;

std::string freshDir() {
  fs::path dir = fs::temp_directory_path() /
                 ("minimax_cli_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

CliRun runCli(const std::string& args) {
  std::string dir = freshDir();
  std::string errPath = dir + "/stderr.txt";
  std::string cmd =
      std::string(SOLVE_BIN) + " " + args + " >/dev/null 2>" + errPath;
  int status = std::system(cmd.c_str());
  CliRun result;
  result.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(errPath);
  std::stringstream buf;
  buf << in.rdbuf();
  result.err = buf.str();
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int lineCount(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("cli: a default minimax run writes its artifacts and exits 0") {
  std::string dir = freshDir();
  CliRun run = runCli("minimax --problem ex53 --out " + dir);
  CHECK(run.exit == 0);
  CHECK(fs::exists(dir + "/trace.csv"));
  CHECK(fs::exists(dir + "/trace.json"));

  json summary = json::parse(slurp(dir + "/summary.json"));
  CHECK(summary.at("terminationReason") == "pTol");
  CHECK(std::abs(summary.at("G").get<double>() - 1.0) <= 1e-3);
  CHECK(summary.at("config").at("epsilon") == 0.4);
  CHECK(summary.at("config").at("theta0") == json({1.0, 1.0}));
  CHECK(summary.at("seed").is_null());

  std::string csv = slurp(dir + "/trace.csv");
  CHECK(csv.rfind("k,G,normP,alpha,accepted,kktResidual\n", 0) == 0);
  CHECK(lineCount(csv) == summary.at("iterations").get<int>() + 1);
}

TEST_CASE("cli: the iteration cap maps to exit code 2") {
  std::string dir = freshDir();
  CliRun run = runCli("minimax --problem ex51 --max-iter 1 --out " + dir);
  CHECK(run.exit == 2);
  json summary = json::parse(slurp(dir + "/summary.json"));
  CHECK(summary.at("terminationReason") == "maxIter");
}

TEST_CASE("cli: bad configuration values name the field and exit 1") {
  CliRun sigma = runCli("minimax --problem ex51 --sigma 1.5");
  CHECK(sigma.exit == 1);
  CHECK(sigma.err.find("sigma") != std::string::npos);

  CliRun problem = runCli("minimax --problem nope");
  CHECK(problem.exit == 1);
  CHECK(problem.err.find("nope") != std::string::npos);

  CliRun theta = runCli("minimax --problem ex51 --theta0 1,2,3");
  CHECK(theta.exit == 1);
  CHECK(theta.err.find("theta0") != std::string::npos);

  CliRun flag = runCli("minimax --no-such-flag 1");
  CHECK(flag.exit == 1);

  CliRun exclusive = runCli("minimax --problem ex51 --theta0 1,1 --seed 3");
  CHECK(exclusive.exit == 1);
}

TEST_CASE("cli: a front sweep writes one row per reference") {
  std::string dir = freshDir();
  CliRun run = runCli("mop --problem ex51 --H 9 --out " + dir);
  CHECK(run.exit == 0);

  std::string refs = slurp(dir + "/refs.csv");
  CHECK(lineCount(refs) == 11);  // header + C(10, 1) = 10 lattice points
  std::string raw = slurp(dir + "/front_raw.csv");
  CHECK(lineCount(raw) == 11);
  std::string filtered = slurp(dir + "/front_filtered.csv");
  CHECK(lineCount(filtered) <= lineCount(raw));
  CHECK(lineCount(filtered) >= 2);

  json plot = json::parse(slurp(dir + "/plotdata.json"));
  CHECK(plot.at("points").size() == lineCount(filtered) - 1);
  json summary = json::parse(slurp(dir + "/summary.json"));
  CHECK(summary.at("references") == 10);
  CHECK(summary.at("terminationReasons").size() == 10);
}

TEST_CASE("cli: front sweeps are byte identical across runs and job counts") {
  std::string d1 = freshDir(), d2 = freshDir();
  CHECK(runCli("mop --problem ex51 --H 5 --jobs 1 --out " + d1).exit == 0);
  CHECK(runCli("mop --problem ex51 --H 5 --jobs 4 --out " + d2).exit == 0);
  CHECK(slurp(d1 + "/front_raw.csv") == slurp(d2 + "/front_raw.csv"));
  CHECK(slurp(d1 + "/front_filtered.csv") == slurp(d2 + "/front_filtered.csv"));
  CHECK(slurp(d1 + "/refs.csv") == slurp(d2 + "/refs.csv"));
  CHECK(slurp(d1 + "/plotdata.json") == slurp(d2 + "/plotdata.json"));
}

TEST_CASE("cli: gen-refs emits the frozen lattice") {
  std::string dir = freshDir();
  CHECK(runCli("gen-refs --H 4 --out " + dir).exit == 0);
  CHECK(slurp(dir + "/refs.csv") ==
        "refIndex,u_1,u_2\n"
        "0,0,1\n"
        "1,0.25,0.75\n"
        "2,0.5,0.5\n"
        "3,0.75,0.25\n"
        "4,1,0\n");
}

TEST_CASE("cli: seeded starts are reproducible and echoed") {
  std::string d1 = freshDir(), d2 = freshDir();
  CHECK(runCli("minimax --problem ex51 --seed 42 --out " + d1).exit == 0);
  CHECK(runCli("minimax --problem ex51 --seed 42 --out " + d2).exit == 0);
  json s1 = json::parse(slurp(d1 + "/summary.json"));
  json s2 = json::parse(slurp(d2 + "/summary.json"));
  CHECK(s1.at("config").at("theta0") == s2.at("config").at("theta0"));
  CHECK(s1.at("seed") == 42);
  CHECK(slurp(d1 + "/trace.csv") == slurp(d2 + "/trace.csv"));

  std::string d3 = freshDir();
  CHECK(runCli("minimax --problem ex51 --seed 43 --out " + d3).exit == 0);
  json s3 = json::parse(slurp(d3 + "/summary.json"));
  CHECK(s3.at("config").at("theta0") != s1.at("config").at("theta0"));
}

TEST_CASE("cli: config files load first and flags override them") {
  std::string dir = freshDir();
  std::string cfgPath = dir + "/run.json";
  {
    std::ofstream out(cfgPath);
    out << R"({"problem": "ex53", "maxIter": 1})";
  }
  CliRun capped = runCli("minimax --config " + cfgPath + " --out " + dir);
  CHECK(capped.exit == 2);

  CliRun released = runCli("minimax --config " + cfgPath +
                           " --max-iter 100000 --out " + dir);
  CHECK(released.exit == 0);

  std::string badPath = dir + "/bad.json";
  {
    std::ofstream out(badPath);
    out << R"({"epsilon": 2.0})";
  }
  CliRun bad = runCli("minimax --config " + badPath);
  CHECK(bad.exit == 1);
  CHECK(bad.err.find("epsilon") != std::string::npos);

  std::string unknownPath = dir + "/unknown.json";
  {
    std::ofstream out(unknownPath);
    out << R"({"bogus": 1})";
  }
  CliRun unknown = runCli("minimax --config " + unknownPath);
  CHECK(unknown.exit == 1);
  CHECK(unknown.err.find("bogus") != std::string::npos);

  std::string brokenPath = dir + "/broken.json";
  {
    std::ofstream out(brokenPath);
    out << "{not json";
  }
  CHECK(runCli("minimax --config " + brokenPath).exit == 1);
}

TEST_CASE("cli: the echoed config reproduces the run") {
  std::string d1 = freshDir(), d2 = freshDir();
  CHECK(runCli("minimax --problem ex53 --epsilon 0.3 --out " + d1).exit == 0);
  json summary = json::parse(slurp(d1 + "/summary.json"));
  std::string echoPath = d1 + "/echo.json";
  {
    std::ofstream out(echoPath);
    out << summary.at("config").dump();
  }
  CHECK(runCli("minimax --config " + echoPath + " --out " + d2).exit == 0);
  CHECK(slurp(d1 + "/trace.csv") == slurp(d2 + "/trace.csv"));
}

TEST_CASE("cli: validate passes on the shipped problems and exits 4 on a bad gradient") {
  std::string dir = freshDir();
  CliRun good = runCli("validate --problem ex51 --out " + dir);
  CHECK(good.exit == 0);
  json report = json::parse(slurp(dir + "/validate.json"));
  CHECK(report.at("pass") == true);
  CHECK(report.at("checks").size() >= 3);

  std::string badDir = freshDir();
  CliRun bad = runCli("validate --problem badgrad --out " + badDir);
  CHECK(bad.exit == 4);
  json badReport = json::parse(slurp(badDir + "/validate.json"));
  CHECK(badReport.at("pass") == false);
  bool sawFailure = false;
  for (const auto& check : badReport.at("checks"))
    if (check.at("pass") == false) sawFailure = true;
  CHECK(sawFailure);
}

TEST_CASE("cli: validate cross-checks the two-well oracles") {
  std::string dir = freshDir();
  CliRun run = runCli("validate --problem ex52 --n 3 --out " + dir);
  CHECK(run.exit == 0);
  json report = json::parse(slurp(dir + "/validate.json"));
  bool sawOracle = false;
  for (const auto& check : report.at("checks"))
    if (check.at("name") == "ex52_oracle") {
      sawOracle = true;
      CHECK(check.at("pass") == true);
    }
  CHECK(sawOracle);
}
