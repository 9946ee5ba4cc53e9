#include "minimax/simplex_qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace minimax {

Vector projectSimplex(const Vector& w) {
  const int d = static_cast<int>(w.size());
  if (d < 1) throw std::invalid_argument("projectSimplex needs dimension >= 1");
  if (!w.allFinite())
    throw std::invalid_argument("projectSimplex input must be finite");

  // Sort-and-threshold: find tau with sum max(w - tau, 0) = 1.
  std::vector<double> s(w.data(), w.data() + d);
  std::sort(s.begin(), s.end(), std::greater<double>());
  double cumsum = 0.0, tau = s[0] - 1.0;
  for (int j = 0; j < d; ++j) {
    cumsum += s[j];
    double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (s[j] - t > 0.0) tau = t;
  }
  Vector u = (w.array() - tau).max(0.0).matrix();
  // w - tau cancels catastrophically when the entries are large, leaving
  // an absolute error of order |w| eps in the sum. Rescale so the result
  // lies on the simplex to machine precision regardless of the input
  // magnitude; when the sum is already exactly 1 this is a no-op.
  double total = u.sum();
  if (total > 0.0 && std::isfinite(total)) u /= total;
  return u;
}

namespace {

// First index of the largest entry.
int argmaxIndex(const Vector& c) {
  int best = 0;
  for (int i = 1; i < c.size(); ++i)
    if (c[i] > c[best]) best = i;
  return best;
}

double frankWolfeGap(const Vector& grad, const Vector& u) {
  return grad.dot(u) - grad.minCoeff();
}

}  // namespace

DirectionSolution solveSP(const SubproblemInput& input, double tol, int maxIter,
                          const Vector* warmStart) {
  const int r = static_cast<int>(input.gradients.size());
  if (r < 1) throw std::invalid_argument("solveSP needs at least one component");
  if (input.values.size() != r)
    throw std::invalid_argument("solveSP values/gradients size mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("solveSP tol must be > 0");
  if (maxIter < 1) throw std::invalid_argument("solveSP maxIter must be >= 1");
  const Eigen::Index n = input.gradients[0].size();
  for (const Vector& g : input.gradients)
    if (g.size() != n)
      throw std::invalid_argument("solveSP gradients differ in dimension");
  if (warmStart && warmStart->size() != r)
    throw std::invalid_argument("solveSP warm start has wrong size");

  const Vector& c = input.values;
  DirectionSolution sol;
  sol.iterations = 0;

  if (r == 1) {
    sol.duals = Vector::Ones(1);
    sol.p = -input.gradients[0];
    sol.beta = c[0] + input.gradients[0].dot(sol.p);
    sol.kktResidual = 0.0;
    sol.fwGap = 0.0;
    sol.converged = true;
    return sol;
  }

  Eigen::MatrixXd Q(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      Q(i, j) = Q(j, i) = input.gradients[static_cast<std::size_t>(i)].dot(
          input.gradients[static_cast<std::size_t>(j)]);

  Vector u;
  double gap;
  if (Q.trace() <= 0.0) {
    // All gradients vanish: the dual is linear, a best-value vertex is exact.
    u = Vector::Zero(r);
    u[argmaxIndex(c)] = 1.0;
    gap = frankWolfeGap(Q * u - c, u);
    sol.converged = true;
  } else {
    // Spectral bound by power iteration.
    Vector v = Vector::Ones(r) / std::sqrt(static_cast<double>(r));
    for (int it = 0; it < 20; ++it) {
      Vector w = Q * v;
      double norm = w.norm();
      if (norm <= 0.0) break;
      v = w / norm;
    }
    double lambda = v.dot(Q * v);
    lambda = std::max(lambda, Q.trace() / static_cast<double>(r));

    u = warmStart ? projectSimplex(*warmStart)
                  : Vector::Constant(r, 1.0 / static_cast<double>(r));
    Vector grad = Q * u - c;
    double phi = 0.5 * u.dot(Q * u) - c.dot(u);
    gap = frankWolfeGap(grad, u);
    sol.converged = gap <= tol;
    double step = 1.0 / lambda;
    while (!sol.converged && sol.iterations < maxIter) {
      Vector next = projectSimplex(u - step * grad);
      double phiNext = 0.5 * next.dot(Q * next) - c.dot(next);
      if (phiNext > phi + 1e-12 * (1.0 + std::abs(phi))) {
        // The power estimate undershot the spectral norm; tighten the step.
        lambda *= 2.0;
        step = 1.0 / lambda;
        ++sol.iterations;
        continue;
      }
      u = next;
      phi = phiNext;
      grad = Q * u - c;
      gap = frankWolfeGap(grad, u);
      ++sol.iterations;
      sol.converged = gap <= tol;
    }
  }

  Vector combo = Vector::Zero(n);
  for (int i = 0; i < r; ++i)
    combo += u[i] * input.gradients[static_cast<std::size_t>(i)];
  sol.duals = u;
  sol.p = -combo;
  double beta = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < r; ++i)
    beta = std::max(beta,
                    input.gradients[static_cast<std::size_t>(i)].dot(sol.p) + c[i]);
  sol.beta = beta;
  sol.fwGap = gap;

  double sumResidual = std::abs(u.sum() - 1.0);
  double recoveryResidual = (sol.p + combo).norm();
  double complementarity = 0.0;
  for (int i = 0; i < r; ++i) {
    double slack =
        beta - (input.gradients[static_cast<std::size_t>(i)].dot(sol.p) + c[i]);
    complementarity = std::max(complementarity, std::abs(u[i] * slack));
  }
  sol.kktResidual = std::max({sumResidual, recoveryResidual, complementarity});
  return sol;
}

double minNormOverSimplex(const std::vector<Vector>& gradients, double tol,
                          int maxIter) {
  SubproblemInput input;
  input.gradients = gradients;
  input.values = Vector::Zero(static_cast<Eigen::Index>(gradients.size()));
  input.indices.resize(gradients.size());
  for (std::size_t i = 0; i < gradients.size(); ++i)
    input.indices[i] = static_cast<int>(i);
  return solveSP(input, tol, maxIter).p.norm();
}

SubproblemInput buildSubproblem(const ObjectiveBundle& bundle,
                                const Vector& theta, const ActiveSet& active) {
  SubproblemInput input;
  input.indices = active.indices;
  input.values.resize(static_cast<Eigen::Index>(active.indices.size()));
  input.gradients.reserve(active.indices.size());
  for (std::size_t i = 0; i < active.indices.size(); ++i) {
    input.gradients.push_back(bundle.gradient(active.indices[i], theta));
    input.values[static_cast<Eigen::Index>(i)] =
        bundle.value(active.indices[i], theta);
  }
  return input;
}

double stationarityResidual(const ObjectiveBundle& bundle, const Vector& theta,
                            double delta, double tol, int maxIter) {
  ActiveSet active = activeSet(bundle, theta, delta);
  std::vector<Vector> grads;
  grads.reserve(active.indices.size());
  for (int idx : active.indices) grads.push_back(bundle.gradient(idx, theta));
  return minNormOverSimplex(grads, tol, maxIter);
}

}  // namespace minimax
