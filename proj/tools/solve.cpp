#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "minimax/benchmarks.hpp"
#include "minimax/rng.hpp"
#include "minimax/scalarize.hpp"
#include "minimax/simplex_qp.hpp"
#include "minimax/solver.hpp"
#include "minimax/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using minimax::ObjectiveBundle;
using minimax::ReferenceVector;
using minimax::SolverConfig;
using minimax::TerminationReason;
using minimax::Vector;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitMaxIter = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitValidation = 4;

struct RunConfig {
  std::string mode;
  std::string problem = "ex51";
  bool problemSet = false;
  int n = 20;
  int H = 8;
  SolverConfig solver;
  std::vector<double> theta0;  // explicit start; empty means seed or default
  std::optional<std::uint64_t> seed;
  std::vector<double> v;  // translation; empty means zeros
  double dMin = 1e-3;
  int jobs = 0;  // 0 means hardware concurrency
  std::string out = ".";
};

double numberField(const json& j, const std::string& key) {
  if (!j.at(key).is_number())
    throw std::invalid_argument("config field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int intField(const json& j, const std::string& key) {
  if (!j.at(key).is_number_integer())
    throw std::invalid_argument("config field '" + key +
                                "' must be an integer");
  return j.at(key).get<int>();
}

std::vector<double> listField(const json& j, const std::string& key) {
  if (!j.at(key).is_array())
    throw std::invalid_argument("config field '" + key +
                                "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number())
      throw std::invalid_argument("config field '" + key +
                                  "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void applyConfigFile(RunConfig& rc, const json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") {
      if (!value.is_string())
        throw std::invalid_argument("config field 'mode' must be a string");
      rc.mode = value.get<std::string>();
    } else if (key == "problem") {
      if (!value.is_string())
        throw std::invalid_argument("config field 'problem' must be a string");
      rc.problem = value.get<std::string>();
      rc.problemSet = true;
    } else if (key == "n") {
      rc.n = intField(j, key);
    } else if (key == "H") {
      rc.H = intField(j, key);
    } else if (key == "epsilon") {
      rc.solver.epsilon = numberField(j, key);
    } else if (key == "sigma") {
      rc.solver.sigma = numberField(j, key);
    } else if (key == "gamma") {
      rc.solver.gamma = numberField(j, key);
    } else if (key == "alpha0") {
      rc.solver.alpha0 = numberField(j, key);
    } else if (key == "delta") {
      rc.solver.delta = numberField(j, key);
    } else if (key == "pTol") {
      rc.solver.pTol = numberField(j, key);
    } else if (key == "maxIter") {
      rc.solver.maxOuterIter = intField(j, key);
    } else if (key == "divergenceRadius") {
      rc.solver.divergenceRadius = numberField(j, key);
    } else if (key == "spTol") {
      rc.solver.spTol = numberField(j, key);
    } else if (key == "spMaxIter") {
      rc.solver.spMaxIter = intField(j, key);
    } else if (key == "stepUsesUpdatedAlpha") {
      if (!value.is_boolean())
        throw std::invalid_argument(
            "config field 'stepUsesUpdatedAlpha' must be a boolean");
      rc.solver.stepUsesUpdatedAlpha = value.get<bool>();
    } else if (key == "theta0") {
      if (value.is_null())
        rc.theta0.clear();
      else
        rc.theta0 = listField(j, key);
    } else if (key == "seed") {
      if (value.is_null()) {
        rc.seed.reset();
      } else {
        if (!value.is_number_unsigned() && !value.is_number_integer())
          throw std::invalid_argument(
              "config field 'seed' must be a nonnegative integer");
        rc.seed = value.get<std::uint64_t>();
      }
    } else if (key == "v") {
      if (value.is_null())
        rc.v.clear();
      else
        rc.v = listField(j, key);
    } else if (key == "dMin") {
      rc.dMin = numberField(j, key);
    } else if (key == "jobs") {
      rc.jobs = intField(j, key);
    } else if (key == "out") {
      if (!value.is_string())
        throw std::invalid_argument("config field 'out' must be a string");
      rc.out = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown config field '" + key + "'");
    }
  }
}

json vectorJson(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i]))
      arr.push_back(v[i]);
    else
      arr.push_back(nullptr);
  }
  return arr;
}

json configJson(const RunConfig& rc, const Vector& theta0) {
  json j{{"mode", rc.mode},
         {"problem", rc.problem},
         {"n", rc.n},
         {"H", rc.H},
         {"epsilon", rc.solver.epsilon},
         {"sigma", rc.solver.sigma},
         {"gamma", rc.solver.gamma},
         {"alpha0", rc.solver.alpha0},
         {"delta", rc.solver.delta},
         {"pTol", rc.solver.pTol},
         {"maxIter", rc.solver.maxOuterIter},
         {"divergenceRadius", rc.solver.divergenceRadius},
         {"spTol", rc.solver.spTol},
         {"spMaxIter", rc.solver.spMaxIter},
         {"stepUsesUpdatedAlpha", rc.solver.stepUsesUpdatedAlpha},
         {"theta0", vectorJson(theta0)},
         {"dMin", rc.dMin},
         {"jobs", rc.jobs},
         {"out", rc.out}};
  j["seed"] = rc.seed ? json(*rc.seed) : json(nullptr);
  j["v"] = rc.v.empty() ? json(nullptr) : json(rc.v);
  return j;
}

Vector resolveTheta0(const RunConfig& rc, int n) {
  if (!rc.theta0.empty()) {
    if (static_cast<int>(rc.theta0.size()) != n)
      throw std::invalid_argument(
          "theta0 must have exactly " + std::to_string(n) + " coordinates");
    Vector t(n);
    for (int i = 0; i < n; ++i) t[i] = rc.theta0[static_cast<std::size_t>(i)];
    if (!t.allFinite())
      throw std::invalid_argument("theta0 coordinates must be finite");
    return t;
  }
  if (rc.seed) {
    minimax::Rng rng(*rc.seed);
    Vector t(n);
    for (int i = 0; i < n; ++i) t[i] = rng.uniform(-5.0, 5.0);
    return t;
  }
  return Vector::Ones(n);
}

Vector resolveTranslation(const RunConfig& rc, int m) {
  if (rc.v.empty()) return Vector::Zero(m);
  if (static_cast<int>(rc.v.size()) != m)
    throw std::invalid_argument("v must have exactly " + std::to_string(m) +
                                " entries");
  Vector v(m);
  for (int i = 0; i < m; ++i) v[i] = rc.v[static_cast<std::size_t>(i)];
  return v;
}

int reasonExit(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::pTol:
      return kExitOk;
    case TerminationReason::maxIter:
      return kExitMaxIter;
    case TerminationReason::divergence:
      return kExitDivergence;
  }
  return kExitOk;
}

void writeOut(const RunConfig& rc, const std::string& name,
              const std::string& contents) {
  fs::create_directories(rc.out);
  minimax::writeFile((fs::path(rc.out) / name).string(), contents);
}

int runMinimax(const RunConfig& rc) {
  minimax::BenchmarkProblem prob = minimax::makeBenchmark(rc.problem, rc.n);
  Vector t0 = resolveTheta0(rc, prob.n);
  minimax::MinimaxResult res = minimax::solveMinimax(prob.bundle, t0, rc.solver);

  writeOut(rc, "trace.csv", minimax::traceCsv(res.trace));
  writeOut(rc, "trace.json", minimax::traceJson(res.trace).dump(2) + "\n");

  const auto& summary = res.trace.summary;
  json out{{"config", configJson(rc, t0)},
           {"seed", rc.seed ? json(*rc.seed) : json(nullptr)},
           {"theta", vectorJson(res.theta)},
           {"G", std::isfinite(res.value) ? json(res.value) : json(nullptr)},
           {"stationarityResidual", std::isfinite(summary.finalResidual)
                                        ? json(summary.finalResidual)
                                        : json(nullptr)},
           {"terminationReason", minimax::toString(summary.reason)},
           {"iterations", summary.iterations},
           {"shrinkEvents", summary.shrinkEvents}};
  writeOut(rc, "summary.json", out.dump(2) + "\n");
  return reasonExit(summary.reason);
}

int runMop(const RunConfig& rc) {
  minimax::BenchmarkProblem prob = minimax::makeBenchmark(rc.problem, rc.n);
  const int m = prob.bundle.count();
  Vector t0 = resolveTheta0(rc, prob.n);
  Vector v = resolveTranslation(rc, m);
  std::vector<ReferenceVector> refs = minimax::dasDennis(m, rc.H);
  int jobs = rc.jobs > 0
                 ? rc.jobs
                 : std::max(1u, std::thread::hardware_concurrency());

  std::vector<minimax::FrontPoint> raw = minimax::solveFront(
      prob.bundle, v, refs, t0, rc.solver, rc.dMin, jobs);
  std::vector<minimax::FrontPoint> filtered = minimax::nonDominatedFilter(raw);

  writeOut(rc, "refs.csv", minimax::refsCsv(refs));
  writeOut(rc, "front_raw.csv", minimax::frontCsv(raw, prob.n, m));
  writeOut(rc, "front_filtered.csv", minimax::frontCsv(filtered, prob.n, m));
  writeOut(rc, "plotdata.json", minimax::plotdataJson(filtered).dump(2) + "\n");

  json reasons = json::array();
  int exitCode = kExitOk;
  for (const auto& fp : raw) {
    reasons.push_back(minimax::toString(fp.terminationReason));
    if (fp.terminationReason == TerminationReason::divergence)
      exitCode = kExitDivergence;
    else if (fp.terminationReason == TerminationReason::maxIter &&
             exitCode != kExitDivergence)
      exitCode = kExitMaxIter;
  }
  json out{{"config", configJson(rc, t0)},
           {"seed", rc.seed ? json(*rc.seed) : json(nullptr)},
           {"references", refs.size()},
           {"frontPoints", raw.size()},
           {"filteredPoints", filtered.size()},
           {"terminationReasons", std::move(reasons)}};
  writeOut(rc, "summary.json", out.dump(2) + "\n");
  return exitCode;
}

int runGenRefs(const RunConfig& rc) {
  minimax::BenchmarkProblem prob = minimax::makeBenchmark(rc.problem, rc.n);
  std::vector<ReferenceVector> refs =
      minimax::dasDennis(prob.bundle.count(), rc.H);
  writeOut(rc, "refs.csv", minimax::refsCsv(refs));
  return kExitOk;
}

// ---- validate mode ----

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

ObjectiveBundle corruptedGradientFixture() {
  ObjectiveBundle base = minimax::ex51().bundle;
  minimax::Component broken{
      [base](const Vector& t) { return base.value(0, t); },
      [base](const Vector& t) {
        Vector g = base.gradient(0, t);
        g[0] += 0.5;  // deliberately wrong, the checker must catch it
        return g;
      }};
  minimax::Component ok{[base](const Vector& t) { return base.value(1, t); },
                        [base](const Vector& t) { return base.gradient(1, t); }};
  return ObjectiveBundle(2, {broken, ok});
}

CheckResult gradientCheck(const std::string& name, const ObjectiveBundle& b,
                          double h, double tol, std::uint64_t seed) {
  minimax::Rng rng(seed);
  // Sampling shrinks with dimension so the exponential wells stay active.
  const double range = 5.0 / std::sqrt(static_cast<double>(b.dim()));
  double worst = 0.0;
  for (int pt = 0; pt < 100; ++pt) {
    Vector theta(b.dim());
    for (int i = 0; i < b.dim(); ++i) theta[i] = rng.uniform(-range, range);
    worst = std::max(worst, minimax::checkGradients(b, theta, h).maxCoeff());
  }
  std::ostringstream detail;
  detail << "max deviation " << worst << " (tol " << tol << ")";
  return CheckResult{name, worst <= tol, detail.str()};
}

CheckResult subproblemOracleCheck() {
  minimax::Rng rng(9001);
  double worstU = 0.0, worstGap = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> grads(2, Vector(2));
    Vector c(2);
    for (int i = 0; i < 2; ++i) {
      grads[static_cast<std::size_t>(i)][0] = rng.uniform(-5, 5);
      grads[static_cast<std::size_t>(i)][1] = rng.uniform(-5, 5);
      c[i] = rng.uniform(-5, 5);
    }
    minimax::SubproblemInput in;
    in.gradients = grads;
    in.values = c;
    in.indices = {0, 1};
    minimax::DirectionSolution sol = minimax::solveSP(in, 1e-10, 10000);

    double bestU = 0.0, bestVal = 0.5 * grads[1].squaredNorm() - c[1];
    for (long i = 1; i <= 100000; ++i) {
      double u = static_cast<double>(i) * 1e-5;
      Vector combo = u * grads[0] + (1 - u) * grads[1];
      double val = 0.5 * combo.squaredNorm() - (u * c[0] + (1 - u) * c[1]);
      if (val < bestVal) {
        bestVal = val;
        bestU = u;
      }
    }
    worstU = std::max(worstU, std::abs(sol.duals[0] - bestU));
    double primal = sol.beta + 0.5 * sol.p.squaredNorm();
    Vector combo = sol.duals[0] * grads[0] + sol.duals[1] * grads[1];
    double dualVal = -(0.5 * combo.squaredNorm() - c.dot(sol.duals));
    worstGap = std::max(worstGap, std::abs(primal - dualVal));
  }
  std::ostringstream detail;
  detail << "max |u - u_grid| " << worstU << ", max duality gap " << worstGap;
  return CheckResult{"subproblem_oracle", worstU <= 1e-4 && worstGap <= 1e-8,
                     detail.str()};
}

CheckResult dasDennisCheck() {
  auto binomial = [](int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
      r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
  };
  for (int m = 2; m <= 5; ++m)
    for (int H = 1; H <= 12; ++H) {
      auto refs = minimax::dasDennis(m, H);
      if (refs.size() != binomial(H + m - 1, m - 1))
        return CheckResult{"das_dennis", false,
                           "count mismatch at m=" + std::to_string(m) +
                               " H=" + std::to_string(H)};
      for (const auto& r : refs)
        if (std::abs(r.weights.sum() - 1.0) > 1e-12)
          return CheckResult{"das_dennis", false, "weights do not sum to 1"};
    }
  auto five = minimax::dasDennis(2, 4);
  const double expected[5][2] = {
      {0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1.0, 0.0}};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(five[static_cast<std::size_t>(i)].weights[j] -
                   expected[i][j]) > 1e-15)
        return CheckResult{"das_dennis", false, "m=2 H=4 enumeration mismatch"};
  return CheckResult{"das_dennis", true, "counts and frozen enumeration match"};
}

CheckResult ex52OracleCheck(int n) {
  minimax::BenchmarkProblem prob = minimax::ex52(n);
  minimax::Rng rng(9002);
  // The residual floor on the segment is sqrt(2) * 1e-6: the dual solve
  // stops on a 1e-12 Frank-Wolfe gap and the gap scales like residual^2 / 2.
  for (int i = 0; i <= 50; ++i) {
    double s = -1.0 + 2.0 * i / 50.0;
    Vector theta = Vector::Constant(n, s / n);
    auto check = minimax::paretoStationaryCheck(prob, theta, 2e-6);
    if (!check.stationary)
      return CheckResult{"ex52_oracle", false,
                         "segment point failed the residual certificate"};
    if (!prob.paretoOracle(theta, 1e-4))
      return CheckResult{"ex52_oracle", false,
                         "segment point failed the segment oracle"};
  }
  for (int trial = 0; trial < 200; ++trial) {
    Vector theta(n);
    for (int i = 0; i < n; ++i) theta[i] = rng.uniform(-1.0, 1.0);
    bool byResidual =
        minimax::paretoStationaryCheck(prob, theta, 2e-6).stationary;
    bool bySegment = minimax::ex52SegmentDistance(theta, n) <= 1e-4;
    if (byResidual != bySegment)
      return CheckResult{"ex52_oracle", false,
                         "residual and segment oracles disagree"};
  }
  return CheckResult{"ex52_oracle", true,
                     "residual certificate agrees with the segment"};
}

int runValidate(const RunConfig& rc, bool problemGiven) {
  std::vector<CheckResult> checks;
  auto tchebyRefs = [](int m) {
    std::vector<ReferenceVector> refs;
    refs.push_back(ReferenceVector{Vector::Constant(m, 1.0 / m)});
    Vector corner = Vector::Zero(m);
    corner[0] = 1.0;
    refs.push_back(ReferenceVector{corner});
    return refs;
  };

  std::vector<std::pair<std::string, ObjectiveBundle>> bundles;
  if (rc.problem == "badgrad") {
    bundles.emplace_back("badgrad", corruptedGradientFixture());
  } else if (problemGiven) {
    auto prob = minimax::makeBenchmark(rc.problem, rc.n);
    bundles.emplace_back(prob.id, prob.bundle);
  } else {
    for (const std::string& id : {"ex51", "ex52", "ex53"}) {
      auto prob = minimax::makeBenchmark(id, rc.n);
      bundles.emplace_back(prob.id, prob.bundle);
    }
  }

  std::uint64_t seed = 1234;
  for (const auto& [id, bundle] : bundles) {
    checks.push_back(
        gradientCheck("gradients_" + id, bundle, 1e-6, 1e-5, seed++));
    for (const auto& ref : tchebyRefs(bundle.count())) {
      ObjectiveBundle wrapped = minimax::buildTchebycheff(
          bundle, Vector::Zero(bundle.count()), ref, rc.dMin);
      checks.push_back(gradientCheck("tchebycheff_gradients_" + id, wrapped,
                                     1e-5, 1e-5, seed++));
    }
  }
  checks.push_back(subproblemOracleCheck());
  checks.push_back(dasDennisCheck());
  if (rc.problem == "ex52") checks.push_back(ex52OracleCheck(rc.n));

  bool allPass = true;
  json list = json::array();
  for (const auto& c : checks) {
    allPass = allPass && c.pass;
    list.push_back(
        json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  json out{{"checks", std::move(list)}, {"pass", allPass}};
  writeOut(rc, "validate.json", out.dump(2) + "\n");
  return allPass ? kExitOk : kExitValidation;
}

std::vector<double> parseCsvList(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used != item.size())
      throw std::invalid_argument("theta0 must be a comma separated number list");
    values.push_back(x);
  }
  if (values.empty())
    throw std::invalid_argument("theta0 must be a comma separated number list");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;

  // The config file loads first so explicit flags can override it.
  try {
    for (int i = 1; i < argc; ++i) {
      std::string arg = argv[i];
      std::string path;
      if (arg == "--config" && i + 1 < argc)
        path = argv[i + 1];
      else if (arg.rfind("--config=", 0) == 0)
        path = arg.substr(9);
      else
        continue;
      std::ifstream in(path);
      if (!in) throw std::invalid_argument("cannot read config file: " + path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config file is not valid JSON: ") +
                                    e.what());
      }
      applyConfigFile(rc, j);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"nonmonotone descent solver for finite minimax problems"};
  app.fallthrough();
  std::string theta0Text;
  std::string configPath;
  std::uint64_t seedValue = 0;

  auto* optProblem = app.add_option("--problem", rc.problem,
                                    "benchmark id: ex51 | ex52 | ex53");
  app.add_option("--n", rc.n, "dimension (ex52 only)");
  app.add_option("--H", rc.H, "reference lattice resolution");
  app.add_option("--epsilon", rc.solver.epsilon, "decrease test factor");
  app.add_option("--sigma", rc.solver.sigma, "step shrink factor");
  app.add_option("--gamma", rc.solver.gamma, "step growth base");
  app.add_option("--alpha0", rc.solver.alpha0, "initial step length");
  app.add_option("--delta", rc.solver.delta, "active-set margin");
  app.add_option("--ptol", rc.solver.pTol, "direction-norm stop tolerance");
  app.add_option("--max-iter", rc.solver.maxOuterIter, "outer iteration cap");
  auto* optTheta = app.add_option("--theta0", theta0Text,
                                  "start point as comma separated list");
  auto* optSeed = app.add_option("--seed", seedValue,
                                 "seed for a uniform start in [-5,5]^n");
  optTheta->excludes(optSeed);
  app.add_option("--out", rc.out, "output directory");
  app.add_option("--jobs", rc.jobs, "concurrent solves (0 = hardware)");
  app.add_option("--config", configPath, "JSON config file");

  app.require_subcommand(1);
  CLI::App* cmdMinimax =
      app.add_subcommand("minimax", "single minimax solve");
  CLI::App* cmdMop = app.add_subcommand("mop", "scalarized front sweep");
  CLI::App* cmdGenRefs =
      app.add_subcommand("gen-refs", "emit the reference lattice only");
  CLI::App* cmdValidate =
      app.add_subcommand("validate", "oracle and gradient self checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (cmdMinimax->parsed()) rc.mode = "minimax";
    if (cmdMop->parsed()) rc.mode = "mop";
    if (cmdGenRefs->parsed()) rc.mode = "gen-refs";
    if (cmdValidate->parsed()) rc.mode = "validate";
    if (!theta0Text.empty()) rc.theta0 = parseCsvList(theta0Text);
    if (optSeed->count() > 0) rc.seed = seedValue;

    rc.solver.validate();
    if (rc.n < 1) throw std::invalid_argument("n must be >= 1");
    if (rc.H < 1) throw std::invalid_argument("H must be >= 1");
    if (rc.jobs < 0) throw std::invalid_argument("jobs must be >= 0");
    if (!(rc.dMin > 0.0)) throw std::invalid_argument("dMin must be > 0");

    if (rc.mode == "minimax") return runMinimax(rc);
    if (rc.mode == "mop") return runMop(rc);
    if (rc.mode == "gen-refs") return runGenRefs(rc);
    if (rc.mode == "validate")
      return runValidate(rc, rc.problemSet || optProblem->count() > 0);
    throw std::invalid_argument("mode must be minimax, mop, gen-refs or validate");
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
