#pragma once

#include <vector>

#include "minimax/objective.hpp"
#include "minimax/solver.hpp"

namespace minimax {

struct ReferenceVector {
  Vector weights;  // nonnegative, sums to 1
};

// Simplex-lattice design: all m-vectors with entries in {0, 1/H, ..., 1}
// summing to 1, in ascending lexicographic order. Size C(H+m-1, m-1).
std::vector<ReferenceVector> dasDennis(int m, int H);

// Wrap a base bundle into its Tchebycheff scalarization around translation v:
// component j maps to (g_j(theta) - v_j) / d_j with d_j = max(ref_j, dMin).
ObjectiveBundle buildTchebycheff(const ObjectiveBundle& base, const Vector& v,
                                 const ReferenceVector& ref, double dMin);

struct FrontPoint {
  int refIndex;
  ReferenceVector reference;
  Vector theta;
  Vector objectives;            // base component values at theta
  double scalarValue;           // scalarized max at theta
  double stationarityResidual;  // min-norm certificate over all base gradients
  TerminationReason terminationReason;
  int iterations;
};

// One scalarized solve per reference vector, all from the shared theta0.
// Runs up to `jobs` solves concurrently; results keep reference order.
std::vector<FrontPoint> solveFront(const ObjectiveBundle& base, const Vector& v,
                                   const std::vector<ReferenceVector>& refs,
                                   const Vector& theta0, const SolverConfig& cfg,
                                   double dMin = 1e-3, int jobs = 1);

// f1 <= f2 entrywise.
bool weaklyDominates(const Vector& f1, const Vector& f2);
// Weak dominance plus at least one strict inequality; equal vectors
// do not dominate each other.
bool dominates(const Vector& f1, const Vector& f2);

// Keep the points whose objective vectors no other point dominates,
// preserving input order.
std::vector<FrontPoint> nonDominatedFilter(const std::vector<FrontPoint>& pts);

}  // namespace minimax
