#include "minimax/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace minimax {

using nlohmann::json;

std::string fmtReal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf);
}

namespace {

json realOrNull(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json vectorJson(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(realOrNull(v[i]));
  return arr;
}

}  // namespace

std::string traceCsv(const IterationTrace& trace) {
  std::string out = "k,G,normP,alpha,accepted,kktResidual\n";
  for (const IterationRecord& r : trace.records) {
    out += std::to_string(r.k);
    out += ',';
    out += fmtReal(r.G);
    out += ',';
    out += fmtReal(r.normP);
    out += ',';
    out += fmtReal(r.alpha);
    out += ',';
    out += r.accepted ? '1' : '0';
    out += ',';
    out += fmtReal(r.kktResidual);
    out += '\n';
  }
  return out;
}

json traceJson(const IterationTrace& trace, int thetaLimit) {
  json records = json::array();
  for (const IterationRecord& r : trace.records) {
    json rec{{"k", r.k},
             {"G", realOrNull(r.G)},
             {"normP", realOrNull(r.normP)},
             {"beta", realOrNull(r.beta)},
             {"alpha", realOrNull(r.alpha)},
             {"accepted", r.accepted},
             {"activeIndices", r.activeIndices},
             {"duals", vectorJson(r.duals)},
             {"kktResidual", realOrNull(r.kktResidual)}};
    if (r.theta.size() <= thetaLimit)
      rec["theta"] = vectorJson(r.theta);
    else
      rec["theta"] = "elided";
    records.push_back(std::move(rec));
  }
  return json{{"records", std::move(records)},
              {"summary",
               {{"iterations", trace.summary.iterations},
                {"shrinkEvents", trace.summary.shrinkEvents},
                {"finalResidual", realOrNull(trace.summary.finalResidual)},
                {"reason", toString(trace.summary.reason)}}}};
}

std::string frontCsv(const std::vector<FrontPoint>& pts, int dim, int m,
                     int thetaLimit) {
  const bool withTheta = dim <= thetaLimit;
  std::string out = "refIndex";
  for (int j = 1; j <= m; ++j) out += ",u_" + std::to_string(j);
  if (withTheta)
    for (int j = 1; j <= dim; ++j) out += ",theta_" + std::to_string(j);
  for (int j = 1; j <= m; ++j) out += ",g_" + std::to_string(j);
  out += ",scalarValue,stationarityResidual,terminationReason,iterations\n";

  for (const FrontPoint& fp : pts) {
    out += std::to_string(fp.refIndex);
    for (Eigen::Index j = 0; j < fp.reference.weights.size(); ++j) {
      out += ',';
      out += fmtReal(fp.reference.weights[j]);
    }
    if (withTheta)
      for (Eigen::Index j = 0; j < fp.theta.size(); ++j) {
        out += ',';
        out += fmtReal(fp.theta[j]);
      }
    for (Eigen::Index j = 0; j < fp.objectives.size(); ++j) {
      out += ',';
      out += fmtReal(fp.objectives[j]);
    }
    out += ',';
    out += fmtReal(fp.scalarValue);
    out += ',';
    out += fmtReal(fp.stationarityResidual);
    out += ',';
    out += toString(fp.terminationReason);
    out += ',';
    out += std::to_string(fp.iterations);
    out += '\n';
  }
  return out;
}

std::string refsCsv(const std::vector<ReferenceVector>& refs) {
  if (refs.empty()) return "refIndex\n";
  std::string out = "refIndex";
  for (Eigen::Index j = 1; j <= refs[0].weights.size(); ++j)
    out += ",u_" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < refs[i].weights.size(); ++j) {
      out += ',';
      out += fmtReal(refs[i].weights[j]);
    }
    out += '\n';
  }
  return out;
}

json plotdataJson(const std::vector<FrontPoint>& pts) {
  json points = json::array();
  for (const FrontPoint& fp : pts)
    points.push_back(json{{"refIndex", fp.refIndex},
                          {"ref", vectorJson(fp.reference.weights)},
                          {"g", vectorJson(fp.objectives)}});
  return json{{"points", std::move(points)}};
}

void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(contents.data(),
            static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace minimax
