#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "minimax/benchmarks.hpp"
#include "minimax/rng.hpp"
#include "minimax/scalarize.hpp"
#include "oracles.hpp"

using minimax::FrontPoint;
using minimax::ObjectiveBundle;
using minimax::ReferenceVector;
using minimax::SolverConfig;
using minimax::TerminationReason;
using minimax::Vector;

namespace {

ReferenceVector ref2(double a, double b) {
  Vector w(2);
  w << a, b;
  return ReferenceVector{w};
}

FrontPoint pointWith(int idx, double f1, double f2) {
  FrontPoint fp;
  fp.refIndex = idx;
  fp.reference = ref2(0.5, 0.5);
  fp.theta = Vector::Zero(2);
  fp.objectives = Vector(2);
  fp.objectives << f1, f2;
  fp.scalarValue = 0.0;
  fp.stationarityResidual = 0.0;
  fp.terminationReason = TerminationReason::pTol;
  fp.iterations = 0;
  return fp;
}

}  // namespace

TEST_CASE("dasDennis enumerates the m = 2, H = 4 lattice in order") {
  auto refs = minimax::dasDennis(2, 4);
  REQUIRE(refs.size() == 5);
  const double expected[5][2] = {
      {0.0, 1.0}, {0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}, {1.0, 0.0}};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(refs[static_cast<std::size_t>(i)].weights[j] ==
            doctest::Approx(expected[i][j]).epsilon(1e-15));
}

TEST_CASE("dasDennis counts match the lattice size formula") {
  for (int m = 2; m <= 5; ++m)
    for (int H = 1; H <= 12; ++H) {
      auto refs = minimax::dasDennis(m, H);
      CHECK(refs.size() == oracles::binomial(H + m - 1, m - 1));
      for (const auto& r : refs) {
        CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.weights.minCoeff() >= 0.0);
      }
      // Ascending lexicographic order.
      for (std::size_t i = 0; i + 1 < refs.size(); ++i) {
        bool less = false;
        for (int j = 0; j < m; ++j) {
          if (refs[i].weights[j] != refs[i + 1].weights[j]) {
            less = refs[i].weights[j] < refs[i + 1].weights[j];
            break;
          }
        }
        CHECK(less);
      }
    }
  CHECK_THROWS_AS(minimax::dasDennis(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(minimax::dasDennis(2, 0), std::invalid_argument);
}

TEST_CASE("buildTchebycheff scales values and gradients by the weights") {
  ObjectiveBundle base = minimax::ex51().bundle;
  Vector theta(2);
  theta << 1.0, 1.0;
  // g1(1,1) = g2(1,1) = 1/25 + 3.5^2/100 = 0.1625.

  ObjectiveBundle t = minimax::buildTchebycheff(base, Vector::Zero(2),
                                                ref2(0.25, 0.75), 1e-3);
  CHECK(t.value(0, theta) == doctest::Approx(0.65).epsilon(1e-14));
  CHECK(t.value(1, theta) == doctest::Approx(0.1625 / 0.75).epsilon(1e-14));
  for (int j = 0; j < 2; ++j) {
    double d = j == 0 ? 0.25 : 0.75;
    Vector expected = base.gradient(j, theta) / d;
    CHECK((t.gradient(j, theta) - expected).norm() <= 1e-14);
    CHECK((t.gradient(j, theta) - oracles::fdGradient(t, j, theta, 1e-6))
              .norm() <= 1e-6);
  }

  // A zero weight clamps to dMin instead of dividing by zero.
  ObjectiveBundle clamped =
      minimax::buildTchebycheff(base, Vector::Zero(2), ref2(1.0, 0.0), 1e-3);
  CHECK(clamped.value(0, theta) == doctest::Approx(0.1625).epsilon(1e-14));
  CHECK(clamped.value(1, theta) == doctest::Approx(162.5).epsilon(1e-14));
}

TEST_CASE("buildTchebycheff translates by v before scaling") {
  ObjectiveBundle base = minimax::ex51().bundle;
  Vector anchor(2);
  anchor << 1.0, 1.0;
  Vector v = base.values(anchor);
  ObjectiveBundle t =
      minimax::buildTchebycheff(base, v, ref2(0.5, 0.5), 1e-3);
  // At the anchor every translated component vanishes.
  CHECK(minimax::evalMax(t, anchor).value == doctest::Approx(0.0));
  Vector other(2);
  other << 2.0, 0.5;
  CHECK(t.value(0, other) ==
        doctest::Approx((base.value(0, other) - v[0]) / 0.5).epsilon(1e-14));
}

TEST_CASE("buildTchebycheff rejects malformed inputs") {
  ObjectiveBundle base = minimax::ex51().bundle;
  Vector v2 = Vector::Zero(2);
  CHECK_THROWS_AS(
      minimax::buildTchebycheff(base, Vector::Zero(3), ref2(0.5, 0.5), 1e-3),
      std::invalid_argument);
  CHECK_THROWS_AS(minimax::buildTchebycheff(
                      base, v2, ReferenceVector{Vector::Constant(3, 1.0 / 3)},
                      1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimax::buildTchebycheff(base, v2, ref2(0.5, 0.5), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimax::buildTchebycheff(base, v2, ref2(-0.5, 1.5), 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(minimax::buildTchebycheff(base, v2, ref2(0.5, 0.4), 1e-3),
                  std::invalid_argument);
}

TEST_CASE("solveFront equalizes the weighted objectives on the convex pair") {
  minimax::BenchmarkProblem prob = minimax::ex51();
  Vector theta0(2);
  theta0 << 1.0, 1.0;
  SolverConfig cfg;
  auto pts = minimax::solveFront(prob.bundle, Vector::Zero(2),
                                 {ref2(0.5, 0.5)}, theta0, cfg);
  REQUIRE(pts.size() == 1);
  const FrontPoint& fp = pts[0];
  CHECK(fp.refIndex == 0);
  CHECK(toString(fp.terminationReason) == std::string("pTol"));
  // The balanced solve lands on the symmetric optimum (0.9, 0.9) where
  // g1 = g2 = 0.162, so the scalar value is 0.324.
  CHECK(std::abs(fp.theta[0] - 0.9) <= 1e-4);
  CHECK(std::abs(fp.theta[1] - 0.9) <= 1e-4);
  CHECK(std::abs(fp.objectives[0] - fp.objectives[1]) <= 1e-4);
  CHECK(fp.scalarValue == doctest::Approx(0.324).epsilon(1e-3));
  CHECK(fp.stationarityResidual <= 1e-4);
  CHECK(prob.paretoOracle(fp.theta, 1e-3));
}

TEST_CASE("solveFront keeps reference order and is thread count invariant") {
  minimax::BenchmarkProblem prob = minimax::ex51();
  Vector theta0(2);
  theta0 << 1.0, 1.0;
  SolverConfig cfg;
  std::vector<ReferenceVector> refs = {ref2(0.25, 0.75), ref2(0.5, 0.5),
                                       ref2(0.75, 0.25)};
  auto serial = minimax::solveFront(prob.bundle, Vector::Zero(2), refs, theta0,
                                    cfg, 1e-3, 1);
  auto parallel = minimax::solveFront(prob.bundle, Vector::Zero(2), refs,
                                      theta0, cfg, 1e-3, 4);
  REQUIRE(serial.size() == 3);
  REQUIRE(parallel.size() == 3);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    CHECK(serial[i].refIndex == static_cast<int>(i));
    // Bitwise identical results regardless of the worker count.
    CHECK(serial[i].theta == parallel[i].theta);
    CHECK(serial[i].scalarValue == parallel[i].scalarValue);
    CHECK(serial[i].iterations == parallel[i].iterations);
  }
}

TEST_CASE("an interior front on the two-well problem stays on the segment") {
  minimax::BenchmarkProblem prob = minimax::ex52(2);
  SolverConfig cfg;
  cfg.alpha0 = 1e-4;  // the steep scalarized wells need a careful start
  std::vector<ReferenceVector> refs = {ref2(0.25, 0.75), ref2(0.5, 0.5),
                                       ref2(0.75, 0.25)};
  auto pts = minimax::solveFront(prob.bundle, Vector::Zero(2), refs,
                                 Vector::Zero(2), cfg);
  REQUIRE(pts.size() == 3);
  for (const FrontPoint& fp : pts) {
    CHECK(toString(fp.terminationReason) == std::string("pTol"));
    CHECK(minimax::ex52SegmentDistance(fp.theta, 2) <= 1e-3);
    CHECK(fp.stationarityResidual <= 1e-4);
  }
}

TEST_CASE("dominance follows the componentwise definition") {
  Vector a(2), b(2), c(2);
  a << 1.0, 2.0;
  b << 1.0, 3.0;
  c << 2.0, 1.0;
  CHECK(minimax::weaklyDominates(a, b));
  CHECK(minimax::dominates(a, b));
  CHECK(minimax::weaklyDominates(a, a));
  CHECK_FALSE(minimax::dominates(a, a));
  CHECK_FALSE(minimax::weaklyDominates(c, a));
  CHECK_FALSE(minimax::weaklyDominates(a, c));
  CHECK_THROWS_AS(minimax::weaklyDominates(a, Vector::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("nonDominatedFilter matches the brute-force oracle") {
  std::vector<FrontPoint> pts = {pointWith(0, 1.0, 2.0), pointWith(1, 2.0, 1.0),
                                 pointWith(2, 1.5, 1.5), pointWith(3, 2.0, 2.0),
                                 pointWith(4, 1.0, 2.0)};
  std::vector<Vector> objs;
  for (const auto& fp : pts) objs.push_back(fp.objectives);

  auto kept = minimax::nonDominatedFilter(pts);
  auto expected = oracles::bruteNonDominated(objs);
  REQUIRE(kept.size() == expected.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    CHECK(kept[i].refIndex == expected[i]);
  // The duplicate of (1, 2) survives: equal vectors do not dominate.
  CHECK(kept.back().refIndex == 4);
}

TEST_CASE("nonDominatedFilter agrees with the oracle on random fronts") {
  minimax::Rng rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    int count = 2 + static_cast<int>(rng.uniform(0.0, 10.99));
    std::vector<FrontPoint> pts;
    std::vector<Vector> objs;
    for (int i = 0; i < count; ++i) {
      pts.push_back(
          pointWith(i, rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)));
      objs.push_back(pts.back().objectives);
    }
    auto kept = minimax::nonDominatedFilter(pts);
    auto expected = oracles::bruteNonDominated(objs);
    REQUIRE(kept.size() == expected.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
      CHECK(kept[i].refIndex == expected[i]);
  }
}

TEST_CASE("nonDominatedFilter drops points without finite objectives") {
  std::vector<FrontPoint> pts = {pointWith(0, 1.0, 2.0),
                                 pointWith(1, std::numeric_limits<double>::quiet_NaN(), 1.0),
                                 pointWith(2, 2.0, 1.0)};
  auto kept = minimax::nonDominatedFilter(pts);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].refIndex == 0);
  CHECK(kept[1].refIndex == 2);
}
