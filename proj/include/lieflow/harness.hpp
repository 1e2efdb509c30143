#pragma once

// Scenario runs: build the chain graph, estimate recurrence and judge it
// against the scenario's expected recurrent set.

#include <lieflow/chain_graph.hpp>
#include <lieflow/scenario.hpp>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lieflow {

struct Overrides {
  std::optional<double> eps, tau, spacing;
  std::optional<Window> window;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

struct ExperimentReport {
  std::string scenario;
  std::string description;
  Expected expected = Expected::central_subgroup;
  double threshold = 0.0;
  double eps = 0.0, tau = 0.0, spacing = 0.0;
  Window window;
  std::uint64_t seed = 1;

  FlowType flow_type = FlowType::mixed;
  int dim_plus = 0, dim_zero = 0, dim_minus = 0;
  std::string decomposability;

  int node_count = 0, interior_count = 0;
  std::size_t edge_count = 0;
  std::vector<int> recurrent;
  std::vector<std::size_t> component_sizes;
  double max_central_distance = 0.0;
  int near_center = 0, near_center_recurrent = 0;  // interior nodes with central_distance <= spacing/2
  double mutual_reachability = 0.0;
  double invariance_fraction = 1.0;  // sampled phi-invariance of the recurrent set
  int invariance_samples = 0;

  bool passed = false;
  std::vector<std::string> reasons;
  std::vector<std::string> warnings;
  double seconds = 0.0;

  std::shared_ptr<const ChainGraph> graph;
  std::shared_ptr<const SccResult> scc;
};

// Share of sampled (recurrent x, small t) whose phi_t(x) rounds to a
// recurrent node, counting only samples that round to interior nodes.
inline std::pair<double, int> invariance_fraction(const Flow& flow, const ChainGraph& g, const std::vector<int>& recurrent,
                                                  std::uint64_t seed, int samples = 200) {
  if (recurrent.empty()) return {1.0, 0};
  std::vector<char> is_rec(g.size(), 0);
  for (int v : recurrent) is_rec[v] = 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, recurrent.size() - 1);
  std::uniform_real_distribution<double> time(0.0, 0.1 * g.tau);
  int hit = 0, counted = 0;
  for (int s = 0; s < samples; ++s) {
    const int v = recurrent[pick(rng)];
    Vec c;
    try {
      c = flow.chart().log(flow.apply(time(rng), g.nodes[v]));
    } catch (const OutOfWindowError&) {
      continue;
    }
    const int w = nearest_node(g, c);
    if (!g.interior[w]) continue;
    ++counted;
    hit += is_rec[w];
  }
  return {counted ? static_cast<double>(hit) / counted : 1.0, counted};
}

inline ExperimentReport run_scenario(const Scenario& sc, const Overrides& ov = {}) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.scenario = sc.name;
  r.description = sc.description;
  r.expected = sc.expected;
  r.threshold = sc.threshold;
  r.eps = ov.eps.value_or(sc.eps);
  r.tau = ov.tau.value_or(sc.tau);
  r.spacing = ov.spacing.value_or(sc.spacing);
  r.window = ov.window.value_or(sc.window);
  r.seed = ov.seed;

  try {
    const Flow flow = sc.make_flow();
    r.flow_type = classify(flow.jordan(), classify_tol(flow.generator()));
    r.dim_plus = static_cast<int>(flow.tri().plus.cols());
    r.dim_zero = static_cast<int>(flow.tri().zero.cols());
    r.dim_minus = static_cast<int>(flow.tri().minus.cols());
    r.decomposability = to_string(algebra_decomposability_report(flow.chart().algebra(), flow.tri(), sc.class_hint).verdict);
    if (flow.jordan().warning) r.warnings.push_back("Jordan decomposition needed a widened clustering tolerance");

    auto graph = std::make_shared<ChainGraph>(
        build_chain_graph(flow, r.window, r.spacing, r.eps, r.tau, GraphOptions{ov.threads, 8}));
    auto scc = std::make_shared<SccResult>(strongly_connected_components(*graph));
    const RecurrenceReport rec = recurrent_estimate(*graph, *scc);
    for (const auto& w : graph->warnings) r.warnings.push_back(w);

    r.node_count = graph->size();
    r.interior_count = graph->interior_count();
    r.edge_count = graph->edge_count();
    r.recurrent = rec.recurrent;
    for (const auto& c : rec.components) r.component_sizes.push_back(c.size());
    r.max_central_distance = rec.max_central_distance;
    r.mutual_reachability = mutual_reachability_fraction(*graph, *scc);
    std::tie(r.invariance_fraction, r.invariance_samples) = invariance_fraction(flow, *graph, rec.recurrent, ov.seed);

    std::vector<char> is_rec(graph->size(), 0);
    for (int v : rec.recurrent) is_rec[v] = 1;
    for (int i = 0; i < graph->size(); ++i)
      if (graph->interior[i] && graph->central_distance[i] <= r.spacing / 2) {
        ++r.near_center;
        r.near_center_recurrent += is_rec[i];
      }

    if (r.interior_count == 0) {
      r.reasons.push_back("no interior nodes");
    } else if (sc.expected == Expected::central_subgroup) {
      const bool tight = r.max_central_distance <= 2.0 * r.eps;
      const bool covered = r.near_center_recurrent == r.near_center;
      if (!tight) r.reasons.push_back("a recurrent node lies farther than 2 eps from the central subgroup");
      if (!covered) r.reasons.push_back("an interior node on the central subgroup is not recurrent");
      if (r.near_center == 0) r.reasons.push_back("no interior grid node lies on the central subgroup");
      r.passed = tight && covered && r.near_center > 0;
    } else {
      r.passed = r.mutual_reachability >= sc.threshold;
      if (!r.passed) r.reasons.push_back("mutual-reachability fraction below threshold");
    }
    r.graph = std::move(graph);
    r.scc = std::move(scc);
  } catch (const Error& e) {
    throw Error("scenario '" + sc.name + "': " + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline ExperimentReport run_scenario(const std::string& name, const Overrides& ov = {}) {
  return run_scenario(find_scenario(name), ov);
}

struct SweepResult {
  std::vector<ExperimentReport> reports;  // in the order given
  bool monotone = true;  // recurrent sets shrink as eps decreases, on nodes interior at both levels
};

inline SweepResult sweep(const Scenario& sc, const std::vector<double>& eps_list, const Overrides& ov = {}) {
  detail::require(!eps_list.empty(), "sweep needs at least one eps");
  SweepResult out;
  for (double e : eps_list) {
    detail::require(e > 0, "sweep eps values must be positive");
    Overrides o = ov;
    o.eps = e;
    out.reports.push_back(run_scenario(sc, o));
  }
  for (const auto& small : out.reports)
    for (const auto& large : out.reports) {
      if (!(small.eps < large.eps)) continue;
      std::vector<char> in_large(large.node_count, 0);
      for (int v : large.recurrent) in_large[v] = 1;
      for (int v : small.recurrent)
        if (large.graph->interior[v] && !in_large[v]) out.monotone = false;
    }
  return out;
}

struct RestrictionReport {
  bool applicable = false;
  bool all_recurrent = false;   // restricted graph: every interior node recurrent
  double hausdorff = 0.0;       // restricted recurrent set vs ambient trace on G0
  int restricted_interior = 0, restricted_recurrent = 0, trace_nodes = 0;
  bool passed = false;
};

// Re-runs the engine on G0 when g0 is spanned by coordinate axes, with the
// restricted flow, and compares against the ambient recurrent nodes on G0.
inline RestrictionReport restriction_check(const Scenario& sc, const ExperimentReport& ambient) {
  RestrictionReport r;
  const Flow flow = sc.make_flow();
  const GroupChart& chart = flow.chart();
  if (!chart.exp_chart()) return r;
  const Mat& z = flow.tri().zero;
  const int n = chart.dim();
  std::vector<int> axes;
  for (int d = 0; d < n; ++d) {
    const double w = z.row(d).norm();
    if (std::abs(w - 1.0) < 1e-9) axes.push_back(d);
    else if (w > 1e-9) return r;
  }
  if (axes.empty() || static_cast<Eigen::Index>(axes.size()) != z.cols()) return r;
  r.applicable = true;

  const int k = static_cast<int>(axes.size());
  StructureConstants sub(k);
  const auto& full = chart.algebra().structure_constants();
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) sub(a, b, c) = full(axes[a], axes[b], axes[c]);
  LieAlgebra alg(sub);
  Mat d(k, k);
  Window win{Vec(k), Vec(k)};
  for (int a = 0; a < k; ++a) {
    win.lo(a) = ambient.window.lo(axes[a]);
    win.hi(a) = ambient.window.hi(axes[a]);
    for (int b = 0; b < k; ++b) d(a, b) = flow.generator()(axes[a], axes[b]);
  }
  const int step = alg.nilpotency_step();
  GroupChart rc = step > 1 ? GroupChart::nilpotent_exp(alg) : GroupChart::abelian(alg);
  const Flow rf = Flow::derivation(std::move(rc), d);
  const ChainGraph g = build_chain_graph(rf, win, ambient.spacing, ambient.eps, ambient.tau);
  const RecurrenceReport rec = recurrent_estimate(g);
  r.restricted_interior = g.interior_count();
  r.restricted_recurrent = static_cast<int>(rec.recurrent.size());
  r.all_recurrent = r.restricted_recurrent == r.restricted_interior && r.restricted_interior > 0;

  std::vector<Vec> trace;
  const ChainGraph& ag = *ambient.graph;
  for (int v : ambient.recurrent) {
    bool on = true;
    for (int dd = 0; dd < n && on; ++dd)
      if (std::find(axes.begin(), axes.end(), dd) == axes.end() && ag.coords[v](dd) != 0.0) on = false;
    if (!on) continue;
    Vec c(k);
    for (int a = 0; a < k; ++a) c(a) = ag.coords[v](axes[a]);
    trace.push_back(c);
  }
  r.trace_nodes = static_cast<int>(trace.size());
  r.hausdorff = hausdorff(node_coords(g, rec.recurrent), trace);
  r.passed = r.all_recurrent && r.hausdorff <= ambient.spacing * (1.0 + 1e-9);
  return r;
}

}  // namespace lieflow
