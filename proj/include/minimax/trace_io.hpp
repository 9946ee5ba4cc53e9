#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "minimax/scalarize.hpp"
#include "minimax/solver.hpp"

namespace minimax {

// 17 significant digits, '.' decimal separator, locale independent.
std::string fmtReal(double x);

// One row per iteration: k,G,normP,alpha,accepted,kktResidual. LF endings.
std::string traceCsv(const IterationTrace& trace);

// Full per-iteration records; theta arrays are replaced by "elided"
// when the dimension exceeds thetaLimit.
nlohmann::json traceJson(const IterationTrace& trace, int thetaLimit = 50);

// refIndex,u_*,theta_* (dim <= thetaLimit),g_*,scalarValue,
// stationarityResidual,terminationReason,iterations.
std::string frontCsv(const std::vector<FrontPoint>& pts, int dim, int m,
                     int thetaLimit = 50);

std::string refsCsv(const std::vector<ReferenceVector>& refs);

// Per-reference objective vectors, ready for scatter plotting.
nlohmann::json plotdataJson(const std::vector<FrontPoint>& pts);

void writeFile(const std::string& path, const std::string& contents);

}  // namespace minimax
