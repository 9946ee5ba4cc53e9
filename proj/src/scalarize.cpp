#include "minimax/scalarize.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

namespace minimax {

std::vector<ReferenceVector> dasDennis(int m, int H) {
  if (m < 2) throw std::invalid_argument("dasDennis needs m >= 2");
  if (H < 1) throw std::invalid_argument("dasDennis needs H >= 1");

  std::vector<ReferenceVector> refs;
  Vector w(m);
  // Ascending lexicographic enumeration of the simplex lattice.
  std::function<void(int, int)> emit = [&](int pos, int left) {
    if (pos == m - 1) {
      w[pos] = static_cast<double>(left) / H;
      refs.push_back(ReferenceVector{w});
      return;
    }
    for (int t = 0; t <= left; ++t) {
      w[pos] = static_cast<double>(t) / H;
      emit(pos + 1, left - t);
    }
  };
  emit(0, H);
  return refs;
}

ObjectiveBundle buildTchebycheff(const ObjectiveBundle& base, const Vector& v,
                                 const ReferenceVector& ref, double dMin) {
  const int m = base.count();
  if (ref.weights.size() != m)
    throw std::invalid_argument(
        "reference vector length must match the component count");
  if (v.size() != m)
    throw std::invalid_argument(
        "translation vector length must match the component count");
  if (!(dMin > 0.0)) throw std::invalid_argument("dMin must be > 0");
  if (!ref.weights.allFinite() || ref.weights.minCoeff() < 0.0)
    throw std::invalid_argument("reference weights must be finite and >= 0");
  if (std::abs(ref.weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("reference weights must sum to 1");
  if (!v.allFinite())
    throw std::invalid_argument("translation vector must be finite");

  auto shared = std::make_shared<const ObjectiveBundle>(base);
  std::vector<Component> comps;
  comps.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double dj = std::max(ref.weights[j], dMin);
    const double vj = v[j];
    comps.push_back(Component{
        [shared, j, vj, dj](const Vector& theta) {
          return (shared->value(j, theta) - vj) / dj;
        },
        [shared, j, dj](const Vector& theta) {
          return Vector(shared->gradient(j, theta) / dj);
        }});
  }
  return ObjectiveBundle(base.dim(), std::move(comps));
}

namespace {

FrontPoint solveOne(const ObjectiveBundle& base, const Vector& v,
                    const ReferenceVector& ref, int refIndex,
                    const Vector& theta0, const SolverConfig& cfg,
                    double dMin) {
  ObjectiveBundle scalarized = buildTchebycheff(base, v, ref, dMin);
  MinimaxResult res = solveMinimax(scalarized, theta0, cfg);

  FrontPoint fp;
  fp.refIndex = refIndex;
  fp.reference = ref;
  fp.theta = res.theta;
  fp.scalarValue = res.value;
  fp.terminationReason = res.trace.summary.reason;
  fp.iterations = res.trace.summary.iterations;
  fp.objectives = Vector::Constant(base.count(),
                                   std::numeric_limits<double>::quiet_NaN());
  fp.stationarityResidual = std::numeric_limits<double>::quiet_NaN();
  if (res.theta.allFinite()) {
    try {
      fp.objectives = base.values(res.theta);
      std::vector<Vector> grads;
      grads.reserve(static_cast<std::size_t>(base.count()));
      for (int i = 0; i < base.count(); ++i)
        grads.push_back(base.gradient(i, res.theta));
      fp.stationarityResidual =
          minNormOverSimplex(grads, cfg.spTol, cfg.spMaxIter);
    } catch (const EvaluationError&) {
      // divergent solves keep their NaN markers
    }
  }
  return fp;
}

}  // namespace

std::vector<FrontPoint> solveFront(const ObjectiveBundle& base, const Vector& v,
                                   const std::vector<ReferenceVector>& refs,
                                   const Vector& theta0, const SolverConfig& cfg,
                                   double dMin, int jobs) {
  cfg.validate();
  std::vector<FrontPoint> out(refs.size());
  if (refs.empty()) return out;

  const int workers = std::max(
      1, std::min<int>(jobs, static_cast<int>(refs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < refs.size(); ++i)
      out[i] = solveOne(base, v, refs[i], static_cast<int>(i), theta0, cfg,
                        dMin);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr firstError;
  std::mutex errorLock;
  auto work = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= refs.size()) return;
      try {
        out[i] = solveOne(base, v, refs[i], static_cast<int>(i), theta0, cfg,
                          dMin);
      } catch (...) {
        std::lock_guard<std::mutex> hold(errorLock);
        if (!firstError) firstError = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
  return out;
}

bool weaklyDominates(const Vector& f1, const Vector& f2) {
  if (f1.size() != f2.size())
    throw std::invalid_argument("objective vectors differ in length");
  return (f1.array() <= f2.array()).all();
}

bool dominates(const Vector& f1, const Vector& f2) {
  return weaklyDominates(f1, f2) && (f1.array() < f2.array()).any();
}

std::vector<FrontPoint> nonDominatedFilter(const std::vector<FrontPoint>& pts) {
  std::vector<FrontPoint> kept;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].objectives.allFinite()) continue;  // divergent solves drop out
    bool isDominated = false;
    for (std::size_t j = 0; j < pts.size() && !isDominated; ++j)
      if (j != i && pts[j].objectives.allFinite())
        isDominated = dominates(pts[j].objectives, pts[i].objectives);
    if (!isDominated) kept.push_back(pts[i]);
  }
  return kept;
}

}  // namespace minimax
