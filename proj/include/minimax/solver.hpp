#pragma once

#include <string>
#include <vector>

#include "minimax/objective.hpp"
#include "minimax/simplex_qp.hpp"

namespace minimax {

struct SolverConfig {
  double epsilon = 0.4;   // sufficient-decrease factor, in (0, 1/2)
  double sigma = 0.9;     // shrink factor, in (0, 1)
  double gamma = 0.01;    // growth schedule eta_k = gamma^(k+1), in (0, 1)
  double alpha0 = 1.0;    // initial step length
  double delta = 1.0;     // active-set margin
  double pTol = 1e-6;     // stop when |p_k| <= pTol
  int maxOuterIter = 100000;
  double divergenceRadius = 1e100;  // flag divergence when |theta| exceeds it
  double spTol = 1e-10;             // subproblem Frank-Wolfe gap tolerance
  int spMaxIter = 10000;
  // The update theta^{k+1} = theta^k + alpha_k p_k uses the step length that
  // was tested (pre-update). Set this to step with the refreshed alpha instead.
  bool stepUsesUpdatedAlpha = false;

  void validate() const;  // throws std::invalid_argument naming the field
};

// Nonmonotone step-length state: grow alpha by gamma^(k+1) * sigma^s on
// success, shrink by sigma and count a shrink event on failure.
struct StepController {
  double alpha = 1.0;
  int shrinkCount = 0;
  int iteration = 0;
};

StepController updateStep(StepController state, bool accepted, double gamma,
                          double sigma);

// G(theta + alpha p) <= G(theta) - alpha epsilon |p|^2, false when the trial
// value is non-finite.
bool decreaseTest(const ObjectiveBundle& bundle, const Vector& theta,
                  const Vector& p, double alpha, double epsilon);

enum class TerminationReason { pTol, maxIter, divergence };
const char* toString(TerminationReason reason);

struct IterationRecord {
  int k;
  Vector theta;
  double G;
  double normP;
  double beta;
  double alpha;    // step length used for the test and the update
  bool accepted;
  std::vector<int> activeIndices;
  Vector duals;
  double kktResidual;
};

struct TraceSummary {
  int iterations = 0;
  int shrinkEvents = 0;
  double finalResidual = 0.0;  // stationarity residual at the final iterate
  TerminationReason reason = TerminationReason::maxIter;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  TraceSummary summary;
};

struct MinimaxResult {
  Vector theta;
  double value = 0.0;
  IterationTrace trace;
};

MinimaxResult solveMinimax(const ObjectiveBundle& bundle, const Vector& theta0,
                           const SolverConfig& cfg);

}  // namespace minimax
