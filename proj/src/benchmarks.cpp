#include "minimax/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "minimax/simplex_qp.hpp"

namespace minimax {

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Residual-based oracle for problems whose stationary set has no closed form.
std::function<bool(const Vector&, double)> residualOracle(
    ObjectiveBundle bundle) {
  return [bundle = std::move(bundle)](const Vector& theta, double tol) {
    return paretoStationaryCheck(bundle, theta, tol).stationary;
  };
}

}  // namespace

BenchmarkProblem ex51() {
  Component g1{[](const Vector& t) {
                 return t[0] * t[0] / 25.0 +
                        (t[1] - 4.5) * (t[1] - 4.5) / 100.0;
               },
               [](const Vector& t) {
                 return vec2(2.0 * t[0] / 25.0, (t[1] - 4.5) / 50.0);
               }};
  Component g2{[](const Vector& t) {
                 return t[1] * t[1] / 25.0 +
                        (t[0] - 4.5) * (t[0] - 4.5) / 100.0;
               },
               [](const Vector& t) {
                 return vec2((t[0] - 4.5) / 50.0, 2.0 * t[1] / 25.0);
               }};
  ObjectiveBundle bundle(2, {g1, g2});
  return BenchmarkProblem{"ex51", 2, bundle, ConvexityClass::convex,
                          residualOracle(bundle)};
}

BenchmarkProblem ex52(int n) {
  if (n < 1) throw std::invalid_argument("ex52 needs n >= 1");
  const Vector a = Vector::Constant(n, 1.0 / n);
  Component g1{[a](const Vector& t) {
                 return 1.0 - std::exp(-(t - a).squaredNorm());
               },
               [a](const Vector& t) {
                 return Vector(2.0 * std::exp(-(t - a).squaredNorm()) *
                               (t - a));
               }};
  Component g2{[a](const Vector& t) {
                 return 1.0 - std::exp(-(t + a).squaredNorm());
               },
               [a](const Vector& t) {
                 return Vector(2.0 * std::exp(-(t + a).squaredNorm()) *
                               (t + a));
               }};
  ObjectiveBundle bundle(n, {g1, g2});
  return BenchmarkProblem{
      "ex52", n, bundle, ConvexityClass::nonconvex,
      [n](const Vector& theta, double tol) {
        return ex52SegmentDistance(theta, n) <= tol;
      }};
}

BenchmarkProblem ex53() {
  Component g1{[](const Vector& t) { return 1.0 / (t.squaredNorm() + 1.0); },
               [](const Vector& t) {
                 double q = t.squaredNorm() + 1.0;
                 return Vector(-2.0 * t / (q * q));
               }};
  Component g2{[](const Vector& t) {
                 return t[0] * t[0] + 3.0 * t[1] * t[1] + 1.0;
               },
               [](const Vector& t) { return vec2(2.0 * t[0], 6.0 * t[1]); }};
  ObjectiveBundle bundle(2, {g1, g2});
  return BenchmarkProblem{"ex53", 2, bundle, ConvexityClass::mixedPseudoconvex,
                          residualOracle(bundle)};
}

BenchmarkProblem makeBenchmark(const std::string& id, int n) {
  if (id == "ex51") return ex51();
  if (id == "ex52") return ex52(n);
  if (id == "ex53") return ex53();
  throw std::invalid_argument("unknown problem id: " + id);
}

double ex52SegmentDistance(const Vector& theta, int n) {
  if (n < 1 || theta.size() != n)
    throw std::invalid_argument("ex52SegmentDistance dimension mismatch");
  // Along the segment every coordinate equals s/n; the best common value
  // centers the coordinate range, clamped to the segment ends.
  double hi = theta.maxCoeff(), lo = theta.minCoeff();
  double t = std::clamp(0.5 * (hi + lo), -1.0 / n, 1.0 / n);
  return std::max(hi - t, t - lo);
}

StationarityCheck paretoStationaryCheck(const ObjectiveBundle& bundle,
                                        const Vector& theta, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  std::vector<Vector> grads;
  grads.reserve(static_cast<std::size_t>(bundle.count()));
  for (int i = 0; i < bundle.count(); ++i)
    grads.push_back(bundle.gradient(i, theta));
  double residual = minNormOverSimplex(grads, 1e-12, 20000);
  return StationarityCheck{residual <= tol, residual};
}

StationarityCheck paretoStationaryCheck(const BenchmarkProblem& problem,
                                        const Vector& theta, double tol) {
  return paretoStationaryCheck(problem.bundle, theta, tol);
}

}  // namespace minimax
