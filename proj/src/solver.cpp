#include "minimax/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace minimax {

void SolverConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in (0, 0.5)");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("sigma must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");
  if (!(pTol >= 0.0)) throw std::invalid_argument("pTol must be >= 0");
  if (maxOuterIter < 1)
    throw std::invalid_argument("maxOuterIter must be >= 1");
  if (!(divergenceRadius > 0.0))
    throw std::invalid_argument("divergenceRadius must be > 0");
  if (!(spTol > 0.0)) throw std::invalid_argument("spTol must be > 0");
  if (spMaxIter < 1) throw std::invalid_argument("spMaxIter must be >= 1");
}

StepController updateStep(StepController state, bool accepted, double gamma,
                          double sigma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("sigma must lie in (0, 1)");
  if (accepted) {
    // eta_k = gamma^(k+1), damped by sigma^s so growth stays summable.
    state.alpha += std::pow(gamma, state.iteration + 1) *
                   std::pow(sigma, state.shrinkCount);
  } else {
    state.alpha *= sigma;
    state.shrinkCount += 1;
  }
  state.iteration += 1;
  return state;
}

bool decreaseTest(const ObjectiveBundle& bundle, const Vector& theta,
                  const Vector& p, double alpha, double epsilon) {
  double current = evalMax(bundle, theta).value;
  double trial;
  try {
    trial = evalMax(bundle, theta + alpha * p).value;
  } catch (const EvaluationError&) {
    return false;
  }
  return trial <= current - alpha * epsilon * p.squaredNorm();
}

const char* toString(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::pTol:
      return "pTol";
    case TerminationReason::maxIter:
      return "maxIter";
    case TerminationReason::divergence:
      return "divergence";
  }
  return "unknown";
}

MinimaxResult solveMinimax(const ObjectiveBundle& bundle, const Vector& theta0,
                           const SolverConfig& cfg) {
  cfg.validate();
  if (theta0.size() != bundle.dim())
    throw std::invalid_argument("theta0 dimension does not match the bundle");
  if (!theta0.allFinite())
    throw std::invalid_argument("theta0 must be finite");

  MinimaxResult result;
  result.theta = theta0;
  result.value = std::numeric_limits<double>::quiet_NaN();
  IterationTrace& trace = result.trace;
  StepController ctrl{cfg.alpha0, 0, 0};
  TerminationReason reason = TerminationReason::maxIter;

  Vector theta = theta0;
  std::optional<Vector> cachedValues;
  std::vector<int> prevActive;
  Vector prevDuals;

  for (int k = 0;; ++k) {
    if (!theta.allFinite() || theta.norm() > cfg.divergenceRadius) {
      reason = TerminationReason::divergence;
      break;
    }
    Vector values;
    SubproblemInput sub;
    try {
      values = cachedValues ? *cachedValues : bundle.values(theta);
      cachedValues.reset();
      sub = buildSubproblem(bundle, theta,
                            activeSet(values, cfg.delta));
    } catch (const EvaluationError&) {
      reason = TerminationReason::divergence;
      break;
    }
    if (k >= cfg.maxOuterIter) {
      reason = TerminationReason::maxIter;
      break;
    }

    const bool warm = sub.indices == prevActive;
    DirectionSolution dir =
        solveSP(sub, cfg.spTol, cfg.spMaxIter, warm ? &prevDuals : nullptr);
    prevActive = sub.indices;
    prevDuals = dir.duals;

    MaxEval mx = evalMax(values);
    IterationRecord rec;
    rec.k = k;
    rec.theta = theta;
    rec.G = mx.value;
    rec.normP = dir.p.norm();
    rec.beta = dir.beta;
    rec.alpha = ctrl.alpha;
    rec.activeIndices = sub.indices;
    rec.duals = dir.duals;
    rec.kktResidual = dir.kktResidual;

    if (rec.normP <= cfg.pTol) {
      rec.accepted = true;  // p is (numerically) zero, the iterate stays put
      trace.records.push_back(std::move(rec));
      reason = TerminationReason::pTol;
      break;
    }

    // One extra bundle evaluation per iteration: the trial point is the
    // next iterate when the step uses the tested alpha.
    Vector trial = theta + ctrl.alpha * dir.p;
    std::optional<Vector> trialValues;
    try {
      trialValues = bundle.values(trial);
    } catch (const EvaluationError&) {
      trialValues.reset();
    }
    bool accepted =
        trialValues &&
        evalMax(*trialValues).value <=
            mx.value - ctrl.alpha * cfg.epsilon * dir.p.squaredNorm();
    rec.accepted = accepted;
    trace.records.push_back(std::move(rec));

    StepController updated = updateStep(ctrl, accepted, cfg.gamma, cfg.sigma);
    if (cfg.stepUsesUpdatedAlpha) {
      theta += updated.alpha * dir.p;
    } else {
      theta = trial;
      cachedValues = std::move(trialValues);  // empty when the trial blew up
    }
    ctrl = updated;
  }

  result.theta = theta;
  trace.summary.iterations = static_cast<int>(trace.records.size());
  trace.summary.shrinkEvents = ctrl.shrinkCount;
  trace.summary.reason = reason;
  trace.summary.finalResidual = std::numeric_limits<double>::quiet_NaN();
  if (theta.allFinite()) {
    try {
      result.value = evalMax(bundle, theta).value;
      trace.summary.finalResidual = stationarityResidual(
          bundle, theta, cfg.delta, cfg.spTol, cfg.spMaxIter);
    } catch (const EvaluationError&) {
      // leave NaN markers for a divergent final point
    }
  }
  return result;
}

}  // namespace minimax
