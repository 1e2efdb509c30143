// lieflow command-line driver.  Exit status: 0 PASS, 2 FAIL, 1 error.

#include <lieflow/lieflow.hpp>
#include <lieflow/report.hpp>

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace lieflow;

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::string spaced = s;
  for (char& c : spaced)
    if (c == ',') c = ' ';
  auto v = detail::parse_numbers(spaced, what);
  if (v.empty()) throw InputError(what + " is empty");
  return v;
}

struct Common {
  std::optional<double> eps, tau, spacing;
  std::string window;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out, csv, catalog_file;
  bool timing = false;

  void add(CLI::App* app, bool with_eps = true) {
    if (with_eps) app->add_option("--eps", eps, "chain jump radius");
    app->add_option("--tau", tau, "minimum jump time");
    app->add_option("--spacing", spacing, "grid spacing");
    app->add_option("--window", window, "R | lo,hi | lo1,hi1,...,loN,hiN");
    app->add_option("--seed", seed, "seed for sampled diagnostics");
    app->add_option("--threads", threads, "graph workers (0 = all cores)");
    app->add_option("--out", out, "write the JSON report here instead of stdout");
    app->add_option("--csv", csv, "write the per-node CSV here");
    app->add_flag("--timing", timing, "include wall-clock seconds in the JSON");
    app->add_option("--catalog", catalog_file, "catalog file replacing the built-in one");
  }

  Overrides overrides(int dim) const {
    Overrides o;
    o.eps = eps;
    o.tau = tau;
    o.spacing = spacing;
    if (!window.empty()) o.window = parse_window(split_numbers(window, "--window"), dim);
    o.seed = seed;
    o.threads = threads;
    return o;
  }

  std::vector<Scenario> scenarios() const {
    return catalog_file.empty() ? catalog() : parse_catalog(detail::read_text(catalog_file));
  }
};

void emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_atomic(path, text);
}

Json restriction_json(const RestrictionReport& r) {
  return {{"applicable", r.applicable},
          {"all_recurrent", r.all_recurrent},
          {"hausdorff", finite_or_null(r.hausdorff)},
          {"restricted_interior", r.restricted_interior},
          {"restricted_recurrent", r.restricted_recurrent},
          {"trace_nodes", r.trace_nodes},
          {"passed", r.passed}};
}

int cmd_catalog(const Common& c) {
  for (const auto& s : c.scenarios())
    std::cout << s.name << "\t" << to_string(s.chart) << "\t" << to_string(s.mode) << "\texpected=" << to_string(s.expected)
              << "\t" << s.description << "\n";
  return kPass;
}

int cmd_run(const Common& c, const std::string& name) {
  const auto cat = c.scenarios();
  const Scenario& sc = find_scenario(cat, name);
  const ExperimentReport r = run_scenario(sc, c.overrides(sc.make_chart().dim()));
  Json j = to_json(r, c.timing);
  if (sc.expected == Expected::central_subgroup) j["restriction"] = restriction_json(restriction_check(sc, r));
  emit(j, c.out);
  if (!c.csv.empty()) write_atomic(c.csv, to_csv(r));
  return r.passed ? kPass : kFail;
}

int cmd_sweep(const Common& c, const std::string& name, const std::string& eps_list) {
  const auto cat = c.scenarios();
  const Scenario& sc = find_scenario(cat, name);
  const SweepResult s = sweep(sc, split_numbers(eps_list, "--eps"), c.overrides(sc.make_chart().dim()));
  const Json j = to_json(s, c.timing);
  emit(j, c.out);
  if (!c.csv.empty()) {
    std::ostringstream all;
    all.precision(17);
    for (std::size_t k = 0; k < s.reports.size(); ++k) {
      std::istringstream lines(to_csv(s.reports[k]));
      std::string line;
      std::getline(lines, line);
      if (k == 0) all << "eps," << line << '\n';
      while (std::getline(lines, line)) all << s.reports[k].eps << ',' << line << '\n';
    }
    write_atomic(c.csv, all.str());
  }
  return j["verdict"] == "PASS" ? kPass : kFail;
}

Json spectrum_json(const SpectralData& s) {
  Json a = Json::array();
  for (const auto& cl : s.clusters)
    a.push_back({{"re", cl.value.real()}, {"im", cl.value.imag()}, {"multiplicity", cl.multiplicity}});
  return a;
}

std::string csv_block(const std::string& name, const Mat& m) {
  std::ostringstream o;
  o.precision(17);
  o << "# " << name << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) o << (c ? "," : "") << m(r, c) + 0.0;
    o << "\n";
  }
  return o.str();
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    write_atomic(path, text);
}

int cmd_decompose(const std::string& matrix_file, const std::string& out, const std::string& format) {
  const Mat d = load_matrix(matrix_file);
  if (d.rows() != d.cols()) throw InputError("matrix must be square");
  const JordanDecomposition jd = jordan_additive(d);
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "decompose";
  j["H"] = to_json(jd.H);
  j["E"] = to_json(jd.E);
  j["N"] = to_json(jd.N);
  j["spectrum"] = spectrum_json(jd.spectrum);
  j["type"] = to_string(classify(jd, classify_tol(d)));
  j["reconstruction_error"] = inf_norm(Mat(jd.H + jd.E + jd.N - d));
  j["warning"] = jd.warning;
  if (format == "csv") {
    std::string text = csv_block("H", jd.H) + csv_block("E", jd.E) + csv_block("N", jd.N);
    text += "# type\n" + j["type"].get<std::string>() + "\n";
    emit_text(text, out);
  } else {
    emit(j, out);
  }
  return kPass;
}

int cmd_grade(const std::string& algebra_file, const std::string& matrix_file, const std::string& hint,
              const std::string& out, const std::string& format) {
  const AlgebraFile af = load_algebra(algebra_file);
  const Mat d = load_matrix(matrix_file);
  const auto chk = af.algebra.is_derivation(d);
  if (!chk.ok) throw InputError("matrix is not a derivation (defect " + std::to_string(chk.defect) + ")");
  const JordanDecomposition jd = jordan_additive(d);
  const TriDecomposition tri = tri_decomposition(af.algebra, jd);
  const auto dec = algebra_decomposability_report(af.algebra, tri, parse_algebra_class(hint));
  Json layers = Json::array();
  for (const auto& l : tri.layers) layers.push_back({{"lambda", l.lambda}, {"dim", l.basis.cols()}, {"basis", to_json(Mat(l.basis.transpose()))}});
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "grade";
  j["derivation_defect"] = chk.defect;
  j["parts_are_derivations"] = af.algebra.is_derivation(jd.H, 1e-9).ok && af.algebra.is_derivation(jd.E, 1e-9).ok &&
                               af.algebra.is_derivation(jd.N, 1e-9).ok;
  j["type"] = to_string(classify(jd, classify_tol(d)));
  j["layers"] = layers;
  j["dim_plus"] = tri.plus.cols();
  j["dim_zero"] = tri.zero.cols();
  j["dim_minus"] = tri.minus.cols();
  j["bracket_grading_defect"] = bracket_grading_defect(af.algebra, tri.layers);
  j["invariance_defect"] = invariance_defect(d, jd, tri);
  j["ambiguous"] = tri.ambiguous;
  j["decomposability"] = {{"verdict", to_string(dec.verdict)},
                          {"solvable", dec.solvable},
                          {"killing_nondegenerate", dec.killing_nondegenerate},
                          {"killing_negative_definite", dec.killing_negative_definite},
                          {"reason", dec.reason}};
  if (format == "csv") {
    // Basis vectors as rows.
    std::string text;
    for (const auto& l : tri.layers) {
      std::ostringstream name;
      name.precision(17);
      name << "layer " << l.lambda;
      text += csv_block(name.str(), Mat(l.basis.transpose()));
    }
    text += csv_block("plus", Mat(tri.plus.transpose())) + csv_block("zero", Mat(tri.zero.transpose())) +
            csv_block("minus", Mat(tri.minus.transpose()));
    text += "# decomposability\n" + to_string(dec.verdict) + "\n";
    emit_text(text, out);
  } else {
    emit(j, out);
  }
  return kPass;
}

int cmd_quotient(const Common& c, const std::string& name, const std::string& ideal, double u_radius, int samples) {
  const auto cat = c.scenarios();
  const Scenario& sc = find_scenario(cat, name);
  const Flow flow = sc.make_flow();
  const int n = flow.chart().dim();
  Mat h(n, 0);
  if (!ideal.empty())
    for (double v : split_numbers(ideal, "--ideal")) {
      const int i = static_cast<int>(v);
      if (i != v || i < 0 || i >= n) throw InputError("--ideal index out of range");
      h.conservativeResize(n, h.cols() + 1);
      h.col(h.cols() - 1) = Vec::Unit(n, i);
    }
  const QuotientMap qm(flow, h);
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "quotient";
  j["scenario"] = sc.name;
  j["ideal_dim"] = h.cols();
  j["quotient_dim"] = qm.quotient_dim();
  j["ideal_defect"] = qm.ideal_defect();
  j["invariance_defect"] = qm.invariance_defect();
  bool ok = true;
  if (!qm.trivial_quotient()) {
    const Flow& q = qm.induced_flow();
    const double resid = qm.intertwining_residual(100, sc.window.hi.maxCoeff(), c.seed);
    const double eps_w = homo_witness(qm, u_radius, samples, sc.window.hi.maxCoeff(), c.seed);
    j["complement"] = to_json(Mat(qm.complement().transpose()));
    j["induced_derivation"] = to_json(q.generator());
    j["quotient_type"] = to_string(classify(q.jordan(), classify_tol(q.generator())));
    j["intertwining_residual"] = resid;
    j["homo_witness"] = {{"u_radius", u_radius}, {"samples", samples}, {"eps", eps_w}};

    const double eps = c.eps.value_or(sc.eps), tau = c.tau.value_or(sc.tau), spacing = c.spacing.value_or(sc.spacing);
    Window win;
    if (!c.window.empty()) {
      win = parse_window(split_numbers(c.window, "--window"), qm.quotient_dim());
    } else {
      win = Window{Vec(qm.quotient_dim()), Vec(qm.quotient_dim())};
      for (int a = 0; a < qm.quotient_dim(); ++a) {
        Eigen::Index axis;
        qm.complement().col(a).cwiseAbs().maxCoeff(&axis);
        win.lo(a) = sc.window.lo(axis);
        win.hi(a) = sc.window.hi(axis);
      }
    }
    const ChainGraph g = build_chain_graph(q, win, spacing, eps, tau, GraphOptions{c.threads, 8});
    const SccResult scc = strongly_connected_components(g);
    const RecurrenceReport rec = recurrent_estimate(g, scc);
    Json nodes = Json::array();
    for (int v : rec.recurrent) nodes.push_back(to_json(g.coords[v]));
    j["quotient_graph"] = {{"eps", eps},
                           {"tau", tau},
                           {"spacing", spacing},
                           {"window", window_json(win)},
                           {"nodes", g.size()},
                           {"edges", g.edge_count()},
                           {"interior", g.interior_count()},
                           {"recurrent", nodes},
                           {"mutual_reachability", mutual_reachability_fraction(g, scc)}};
    if (!c.csv.empty()) write_atomic(c.csv, to_csv(g, scc, rec.recurrent));
    ok = resid < kQuotientTol && eps_w > 0;
  }
  j["verdict"] = ok ? "PASS" : "FAIL";
  emit(j, c.out);
  return ok ? kPass : kFail;
}

int cmd_chain_graph(const Common& c, const std::string& name, const std::string& algebra_file,
                    const std::string& matrix_file, const std::string& chart) {
  std::optional<Flow> flow;
  Scenario defaults;
  if (!algebra_file.empty()) {
    if (matrix_file.empty()) throw InputError("--algebra needs --matrix");
    AlgebraFile af = load_algebra(algebra_file);
    const ChartKind kind = chart.empty() ? (af.algebra.nilpotency_step() == 1 ? ChartKind::abelian : ChartKind::nilpotent_exp)
                                         : parse_chart_kind(chart);
    GroupChart gc = kind == ChartKind::abelian ? GroupChart::abelian(af.algebra) : GroupChart::nilpotent_exp(af.algebra);
    flow = Flow::derivation(std::move(gc), load_matrix(matrix_file));
    defaults.window = Window::cube(flow->chart().dim(), 2.0);
  } else {
    const auto cat = c.scenarios();
    defaults = find_scenario(cat, name.empty() ? "plane-saddle" : name);
    flow = defaults.make_flow();
  }
  const int dim = flow->chart().dim();
  const Overrides o = c.overrides(dim);
  const double eps = o.eps.value_or(defaults.eps), tau = o.tau.value_or(defaults.tau);
  const double spacing = o.spacing.value_or(defaults.spacing);
  const Window win = o.window.value_or(defaults.window);
  const ChainGraph g = build_chain_graph(*flow, win, spacing, eps, tau, GraphOptions{c.threads, 8});
  const SccResult scc = strongly_connected_components(g);
  const RecurrenceReport rec = recurrent_estimate(g, scc);
  Json j;
  j["schema"] = kReportSchemaVersion;
  j["kind"] = "chain-graph";
  j["parameters"] = {{"eps", eps}, {"tau", tau}, {"spacing", spacing}, {"window", window_json(win)}};
  j["nodes"] = g.size();
  j["edges"] = g.edge_count();
  j["interior"] = g.interior_count();
  Json nodes = Json::array();
  for (int v : rec.recurrent) nodes.push_back(to_json(g.coords[v]));
  j["recurrent"] = nodes;
  std::vector<std::size_t> sizes;
  for (const auto& comp : rec.components) sizes.push_back(comp.size());
  j["component_sizes"] = sizes;
  j["max_central_distance"] = rec.max_central_distance;
  Json cd = Json::array();
  for (double v : g.central_distance) cd.push_back(finite_or_null(v));
  j["central_distance"] = cd;
  j["warnings"] = g.warnings;
  emit(j, c.out);
  if (!c.csv.empty()) write_atomic(c.csv, to_csv(g, scc, rec.recurrent));
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lieflow: chain recurrence of flows of automorphisms on Lie groups"};
  app.require_subcommand(1);

  Common common;
  auto* cat = app.add_subcommand("catalog", "scenario catalog");
  cat->add_option("--catalog", common.catalog_file, "catalog file replacing the built-in one");
  auto* cat_list = cat->add_subcommand("list", "list scenarios");
  cat->require_subcommand(1);
  (void)cat_list;

  std::string scenario;
  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", scenario, "scenario name")->required();
  common.add(run);

  std::string eps_list;
  auto* sw = app.add_subcommand("sweep", "run one scenario over several eps");
  sw->add_option("scenario", scenario, "scenario name")->required();
  sw->add_option("--eps", eps_list, "comma-separated eps values")->required();
  common.add(sw, false);

  std::string matrix_file, algebra_file, class_hint = "general", out;
  auto* dec = app.add_subcommand("decompose", "additive Jordan decomposition of a matrix");
  dec->add_option("--matrix", matrix_file, "matrix file")->required();
  dec->add_option("--out", out, "output file");
  std::string format = "csv";
  dec->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  auto* grade = app.add_subcommand("grade", "eigenspace grading of a derivation");
  grade->add_option("--algebra", algebra_file, "algebra file")->required();
  grade->add_option("--matrix", matrix_file, "derivation matrix file")->required();
  grade->add_option("--class", class_hint, "solvable | semisimple-compact | semisimple-noncompact | general");
  grade->add_option("--out", out, "output file");
  grade->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  std::string ideal;
  double u_radius = 0.3;
  int samples = 100;
  auto* quo = app.add_subcommand("quotient", "induced flow on G/H");
  quo->add_option("scenario", scenario, "scenario name")->required();
  quo->add_option("--ideal", ideal, "comma-separated basis indices spanning h")->required();
  quo->add_option("--u-radius", u_radius, "identity neighbourhood radius for the homo witness");
  quo->add_option("--samples", samples, "witness samples");
  common.add(quo);

  std::string chart;
  auto* cg = app.add_subcommand("chain-graph", "build one chain graph");
  cg->add_option("--scenario", scenario, "scenario supplying the flow and defaults (default plane-saddle)");
  cg->add_option("--algebra", algebra_file, "algebra file (exp chart, derivation flow)");
  cg->add_option("--matrix", matrix_file, "derivation matrix file");
  cg->add_option("--chart", chart, "abelian | nilpotent-exp");
  common.add(cg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (*cat) return cmd_catalog(common);
    if (*run) return cmd_run(common, scenario);
    if (*sw) return cmd_sweep(common, scenario, eps_list);
    if (*dec) return cmd_decompose(matrix_file, out, format);
    if (*grade) return cmd_grade(algebra_file, matrix_file, class_hint, out, format);
    if (*quo) return cmd_quotient(common, scenario, ideal, u_radius, samples);
    if (*cg) return cmd_chain_graph(common, scenario, algebra_file, matrix_file, chart);
  } catch (const std::exception& e) {
    std::cerr << "lieflow: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
