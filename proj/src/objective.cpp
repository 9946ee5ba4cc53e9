#include "minimax/objective.hpp"

#include <cmath>

namespace minimax {

ObjectiveBundle::ObjectiveBundle(int dim, std::vector<Component> components)
    : dim_(dim), components_(std::move(components)) {
  if (dim_ < 1) throw std::invalid_argument("bundle dimension must be >= 1");
  if (components_.empty())
    throw std::invalid_argument("bundle needs at least one component");
  for (const Component& c : components_)
    if (!c.value || !c.gradient)
      throw std::invalid_argument("bundle component callbacks must be set");
}

double ObjectiveBundle::value(int i, const Vector& theta) const {
  if (i < 0 || i >= count())
    throw std::invalid_argument("component index out of range");
  double v = components_[static_cast<std::size_t>(i)].value(theta);
  if (!std::isfinite(v))
    throw EvaluationError(i, "component " + std::to_string(i) +
                                 " produced a non-finite value");
  return v;
}

Vector ObjectiveBundle::gradient(int i, const Vector& theta) const {
  if (i < 0 || i >= count())
    throw std::invalid_argument("component index out of range");
  Vector g = components_[static_cast<std::size_t>(i)].gradient(theta);
  if (g.size() != dim_)
    throw EvaluationError(i, "component " + std::to_string(i) +
                                 " returned a gradient of wrong dimension");
  if (!g.allFinite())
    throw EvaluationError(i, "component " + std::to_string(i) +
                                 " produced a non-finite gradient");
  return g;
}

Vector ObjectiveBundle::values(const Vector& theta) const {
  Vector out(count());
  for (int i = 0; i < count(); ++i) out[i] = value(i, theta);
  return out;
}

MaxEval evalMax(const Vector& values) {
  if (values.size() == 0)
    throw std::invalid_argument("evalMax needs at least one value");
  MaxEval best{values[0], 0};
  for (int i = 1; i < values.size(); ++i)
    if (values[i] > best.value) best = {values[i], i};
  return best;
}

MaxEval evalMax(const ObjectiveBundle& bundle, const Vector& theta) {
  return evalMax(bundle.values(theta));
}

ActiveSet activeSet(const Vector& values, double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("active-set margin delta must be > 0");
  MaxEval mx = evalMax(values);
  ActiveSet active;
  active.margin = delta;
  active.maxValue = mx.value;
  for (int j = 0; j < values.size(); ++j)
    if (values[j] >= mx.value - delta) active.indices.push_back(j);
  return active;
}

ActiveSet activeSet(const ObjectiveBundle& bundle, const Vector& theta,
                    double delta) {
  return activeSet(bundle.values(theta), delta);
}

Vector checkGradients(const ObjectiveBundle& bundle, const Vector& theta,
                      double h) {
  if (!(h > 0.0)) throw std::invalid_argument("difference step h must be > 0");
  Vector worst(bundle.count());
  for (int i = 0; i < bundle.count(); ++i) {
    Vector analytic = bundle.gradient(i, theta);
    double dev = 0.0;
    for (int j = 0; j < theta.size(); ++j) {
      Vector hi = theta, lo = theta;
      hi[j] += h;
      lo[j] -= h;
      double fd = (bundle.value(i, hi) - bundle.value(i, lo)) / (2.0 * h);
      dev = std::max(dev, std::abs(fd - analytic[j]));
    }
    worst[i] = dev;
  }
  return worst;
}

}  // namespace minimax
