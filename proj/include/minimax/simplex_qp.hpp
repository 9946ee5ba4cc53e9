#pragma once

#include <vector>

#include "minimax/objective.hpp"

namespace minimax {

// Euclidean projection onto the unit simplex {u >= 0, sum u = 1},
// exact up to floating point (sort-and-threshold).
Vector projectSimplex(const Vector& w);

// Direction-finding data: a_i = gradients, c_i = component values,
// restricted to the active components at the current iterate.
struct SubproblemInput {
  std::vector<Vector> gradients;
  Vector values;
  std::vector<int> indices;  // originating component ids
};

SubproblemInput buildSubproblem(const ObjectiveBundle& bundle,
                                const Vector& theta, const ActiveSet& active);

// Solution of  min_p,beta  beta + 0.5|p|^2  s.t.  <a_i,p> + c_i <= beta,
// recovered from the dual  min_u  0.5|A u|^2 - <c,u>  over the simplex.
struct DirectionSolution {
  Vector p;
  double beta;
  Vector duals;        // aligned with SubproblemInput order
  double kktResidual;  // max of the three KKT residuals
  double fwGap;        // achieved Frank-Wolfe gap of the dual
  bool converged;      // fwGap <= tol within maxIter
  int iterations;
};

// Projected gradient on the dual with fixed step 1/Lambda, Lambda a power
// iteration bound on the Gram spectral norm; stops on Frank-Wolfe gap <= tol.
// warmStart, when given, must have input.gradients.size() entries.
DirectionSolution solveSP(const SubproblemInput& input, double tol,
                          int maxIter, const Vector* warmStart = nullptr);

// min over the simplex of |sum_i u_i grads_i|, same dual solve with c = 0.
double minNormOverSimplex(const std::vector<Vector>& gradients, double tol,
                          int maxIter);

// Stationarity certificate restricted to J_delta(theta).
double stationarityResidual(const ObjectiveBundle& bundle, const Vector& theta,
                            double delta, double tol, int maxIter = 10000);

}  // namespace minimax
