#pragma once

#include <functional>
#include <string>

#include "minimax/objective.hpp"

namespace minimax {

enum class ConvexityClass { convex, nonconvex, mixedPseudoconvex };

struct BenchmarkProblem {
  std::string id;
  int n;
  ObjectiveBundle bundle;
  ConvexityClass convexity;
  // True when theta lies on the known Pareto-stationary set, within tol.
  std::function<bool(const Vector& theta, double tol)> paretoOracle;
};

// Two rotated convex quadratics on R^2.
BenchmarkProblem ex51();
// Two Gaussian wells 1 - exp(-|theta -+ a|^2), a = (1/n, ..., 1/n); the
// Pareto set is the segment { s a : s in [-1, 1] }.
BenchmarkProblem ex52(int n = 20);
// Pseudoconvex 1/(|theta|^2 + 1) against the quadratic th1^2 + 3 th2^2 + 1.
BenchmarkProblem ex53();

// Lookup by id ("ex51" | "ex52" | "ex53"); n applies to ex52 only.
BenchmarkProblem makeBenchmark(const std::string& id, int n = 20);

// Exact infinity-norm distance from theta to the ex52 segment.
double ex52SegmentDistance(const Vector& theta, int n);

struct StationarityCheck {
  bool stationary;
  double residual;  // min over the full simplex of |sum u_i grad g_i(theta)|
};

// Certificate over all components (no active-set margin).
StationarityCheck paretoStationaryCheck(const BenchmarkProblem& problem,
                                        const Vector& theta, double tol);
StationarityCheck paretoStationaryCheck(const ObjectiveBundle& bundle,
                                        const Vector& theta, double tol);

}  // namespace minimax
