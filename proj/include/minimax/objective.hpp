#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minimax {

using Vector = Eigen::VectorXd;

// One continuously differentiable component g_i of a finite max,
// given by a value callback and an exact-gradient callback.
struct Component {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

// Raised when a component produces a non-finite value or gradient entry.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(int component, const std::string& what)
      : std::runtime_error(what), component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

struct MaxEval {
  double value;
  int argmax;  // smallest index attaining the max
};

struct ActiveSet {
  std::vector<int> indices;  // ascending component indices
  double margin;             // the delta that was applied
  double maxValue;           // G(theta)
};

// Immutable collection of max components over a fixed dimension.
// Thread safe to share across concurrent solves as long as the
// component callbacks themselves are pure.
class ObjectiveBundle {
 public:
  ObjectiveBundle(int dim, std::vector<Component> components);

  int dim() const noexcept { return dim_; }
  int count() const noexcept { return static_cast<int>(components_.size()); }

  // Single component value; throws EvaluationError on a non-finite result.
  double value(int i, const Vector& theta) const;
  // Exact gradient of one component; throws EvaluationError if any entry
  // is non-finite or the callback returns the wrong dimension.
  Vector gradient(int i, const Vector& theta) const;
  // All component values in one pass.
  Vector values(const Vector& theta) const;

 private:
  int dim_;
  std::vector<Component> components_;
};

// G(theta) with smallest-index tie break.
MaxEval evalMax(const ObjectiveBundle& bundle, const Vector& theta);
MaxEval evalMax(const Vector& values);

// J_delta(theta) = { j : g_j(theta) >= G(theta) - delta }, delta > 0.
ActiveSet activeSet(const ObjectiveBundle& bundle, const Vector& theta,
                    double delta);
ActiveSet activeSet(const Vector& values, double delta);

// Central-difference audit of the analytic gradients; returns the
// max abs deviation per component at this theta.
Vector checkGradients(const ObjectiveBundle& bundle, const Vector& theta,
                      double h);

}  // namespace minimax
