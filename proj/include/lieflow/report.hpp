#pragma once

// JSON and CSV emission for experiment reports.  Needs nlohmann/json.

#include <lieflow/harness.hpp>
#include <lieflow/quotient.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

namespace lieflow {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vec(m.row(r).transpose())));
  return a;
}

inline Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json window_json(const Window& w) { return {{"lo", to_json(w.lo)}, {"hi", to_json(w.hi)}}; }

inline Json to_json(const ExperimentReport& r, bool timing = false) {
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "experiment";
  j["scenario"] = r.scenario;
  j["description"] = r.description;
  j["parameters"] = {{"eps", r.eps}, {"tau", r.tau}, {"spacing", r.spacing}, {"window", window_json(r.window)},
                     {"seed", r.seed}};
  j["flow"] = {{"type", to_string(r.flow_type)},
               {"dim_plus", r.dim_plus},
               {"dim_zero", r.dim_zero},
               {"dim_minus", r.dim_minus},
               {"decomposability", r.decomposability}};
  Json rec = Json::array();
  for (int v : r.recurrent) rec.push_back(to_json(r.graph->coords[v]));
  j["graph"] = {{"nodes", r.node_count}, {"edges", r.edge_count}, {"interior", r.interior_count}};
  j["recurrence"] = {{"count", r.recurrent.size()},
                     {"component_sizes", r.component_sizes},
                     {"max_central_distance", r.max_central_distance},
                     {"near_center", r.near_center},
                     {"near_center_recurrent", r.near_center_recurrent},
                     {"mutual_reachability", r.mutual_reachability},
                     {"invariance_fraction", r.invariance_fraction},
                     {"invariance_samples", r.invariance_samples},
                     {"nodes", rec}};
  j["expected"] = to_string(r.expected);
  if (r.expected == Expected::all) j["threshold"] = r.threshold;
  j["verdict"] = r.passed ? "PASS" : "FAIL";
  j["reasons"] = r.reasons;
  j["warnings"] = r.warnings;
  if (timing) j["seconds"] = r.seconds;
  return j;
}

inline Json to_json(const SweepResult& s, bool timing = false) {
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "sweep";
  j["scenario"] = s.reports.empty() ? "" : s.reports.front().scenario;
  j["monotone"] = s.monotone;
  Json runs = Json::array();
  bool all = s.monotone;
  for (const auto& r : s.reports) {
    runs.push_back(to_json(r, timing));
    all = all && r.passed;
  }
  j["runs"] = runs;
  j["verdict"] = all ? "PASS" : "FAIL";
  return j;
}

// One row per node: index, coordinates, interior, recurrent, class, central distance, drift, out-degree.
inline std::string to_csv(const ChainGraph& g, const SccResult& scc, const std::vector<int>& recurrent) {
  std::vector<char> is_rec(g.size(), 0);
  for (int v : recurrent) is_rec[v] = 1;
  std::ostringstream out;
  out.precision(17);
  out << "node";
  for (int d = 0; d < g.window.dim(); ++d) out << ",x" << d;
  out << ",interior,recurrent,component,central_distance,drift,out_degree\n";
  for (int i = 0; i < g.size(); ++i) {
    out << i;
    for (int d = 0; d < g.window.dim(); ++d) out << ',' << g.coords[i](d);
    out << ',' << int(g.interior[i]) << ',' << int(is_rec[i]) << ',' << scc.component[i] << ',';
    if (std::isfinite(g.central_distance[i])) out << g.central_distance[i];
    out << ',' << g.drift[i] << ',' << g.adj[i].size() << '\n';
  }
  return out.str();
}

inline std::string to_csv(const ExperimentReport& r) { return to_csv(*r.graph, *r.scc, r.recurrent); }

// Writes through a temporary file in the same directory and renames it.
inline void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace lieflow
