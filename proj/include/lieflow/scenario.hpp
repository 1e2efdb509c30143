#pragma once

// Scenario catalog.  A catalog is flat key = value text in [name] sections:
//
//   [plane-saddle]
//   algebra   = abelian2        builtin (abelian<n>, heisenberg3, sl2, so3) or a file path
//   chart     = abelian         abelian | nilpotent-exp | matrix-embedded
//   chart_radius = 1.0          matrix charts only
//   derivation = 1 0; 0 -1      rows separated by ';'   (or)
//   inner     = 0 1 0           inner flow element
//   window    = 2               R, "lo hi", or lo_1 hi_1 ... lo_n hi_n
//   spacing / eps / tau         grid and chain defaults
//   class     = solvable        class hint
//   expected  = central         central | all
//   threshold = 0.95            mutual-reachability fraction for expected = all
//   description = ...

#include <lieflow/algebra_io.hpp>
#include <lieflow/chain_graph.hpp>
#include <lieflow/grading.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace lieflow {

enum class Expected { central_subgroup, all };

inline std::string to_string(Expected e) { return e == Expected::all ? "all" : "central subgroup"; }

struct Scenario {
  std::string name;
  std::string description;
  std::string algebra;  // builtin name or file path
  ChartKind chart = ChartKind::abelian;
  double chart_radius = 1.0;
  FlowMode mode = FlowMode::derivation;
  Mat derivation;
  Vec inner;
  Window window;
  double spacing = 0.1, eps = 0.1, tau = 1.0;
  AlgebraClass class_hint = AlgebraClass::general;
  Expected expected = Expected::central_subgroup;
  double threshold = 0.95;

  GroupChart make_chart() const;
  Flow make_flow() const;
};

inline const char* kDefaultCatalog = R"(# Built-in scenarios.
[plane-saddle]
description = hyperbolic saddle on R^2; central subgroup is the identity
algebra = abelian2
chart = abelian
derivation = 1 0; 0 -1
window = 2
spacing = 0.1
eps = 0.1
tau = 1
class = solvable
expected = central

[plane-rotation]
description = rotation flow on R^2 (elliptic)
algebra = abelian2
chart = abelian
derivation = 0 -1; 1 0
window = 2
spacing = 0.1
eps = 0.15
tau = 0.25
class = solvable
expected = all

[plane-shear]
description = shear flow on R^2 (nilpotent derivation)
algebra = abelian2
chart = abelian
derivation = 0 1; 0 0
window = -2 2 -1 1
spacing = 0.1
eps = 0.15
tau = 0.25
class = solvable
expected = all

[heis-saddle]
description = saddle derivation diag(1,-1,0) on the Heisenberg group; central subgroup is the Z axis
algebra = heisenberg3
chart = nilpotent-exp
derivation = 1 0 0; 0 -1 0; 0 0 0
window = 2
spacing = 0.2
eps = 0.1
tau = 1
class = solvable
expected = central

[heis-shear]
description = nilpotent derivation Y -> X on the Heisenberg group
algebra = heisenberg3
chart = nilpotent-exp
derivation = 0 1 0; 0 0 0; 0 0 0
window = 2
spacing = 0.2
eps = 0.3
tau = 0.25
class = solvable
expected = all

[sl2-inner-nilpotent]
description = conjugation by exp(tE) on SL(2,R) near the identity
algebra = sl2
chart = matrix-embedded
chart_radius = 1.0
inner = 0 1 0
window = 0.4
spacing = 0.05
eps = 0.08
tau = 0.1
class = semisimple-noncompact
expected = all
threshold = 0.9

[so3-inner]
description = conjugation by rotations about the third axis on SO(3)
algebra = so3
chart = matrix-embedded
chart_radius = 1.5
inner = 0 0 1
window = 0.5
spacing = 0.05
eps = 0.08
tau = 0.25
class = semisimple-compact
expected = all
)";

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError(what + ": '" + tok + "' is not a number");
    }
  }
  return out;
}

inline double parse_number(const std::string& s, const std::string& what) {
  const auto v = parse_numbers(s, what);
  if (v.size() != 1) throw InputError(what + " expects one number");
  return v[0];
}

inline Mat parse_rows(const std::string& s, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_numbers(row, what));
  if (rows.empty() || rows.front().empty()) throw InputError(what + " is empty");
  Mat m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) throw InputError(what + ": rows have unequal length");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

inline AlgebraFile builtin_or_file(const std::string& name) {
  if (name.rfind("abelian", 0) == 0 && name.size() > 7 && name.find_first_not_of("0123456789", 7) == std::string::npos)
    return {algebras::abelian(std::stoi(name.substr(7))), {}};
  if (name == "heisenberg3") return {algebras::heisenberg3(), {}};
  if (name == "sl2") return {algebras::sl2(), groups::sl2_chart().matrix_basis()};
  if (name == "so3") return {algebras::so3(), groups::so3_chart().matrix_basis()};
  return load_algebra(name);
}

}  // namespace detail

// Window from 1 number (symmetric cube), 2 numbers (same interval on every
// axis) or 2 * dim numbers (lo_1 hi_1 ...).
inline Window parse_window(const std::vector<double>& v, int dim) {
  if (v.size() == 1) {
    if (!(v[0] > 0)) throw InputError("window radius must be positive");
    return Window::cube(dim, v[0]);
  }
  if (v.size() == 2) return {Vec::Constant(dim, v[0]), Vec::Constant(dim, v[1])};
  if (static_cast<int>(v.size()) == 2 * dim) {
    Window w{Vec(dim), Vec(dim)};
    for (int d = 0; d < dim; ++d) {
      w.lo(d) = v[2 * d];
      w.hi(d) = v[2 * d + 1];
    }
    return w;
  }
  throw InputError("window needs 1, 2 or " + std::to_string(2 * dim) + " numbers");
}

inline GroupChart Scenario::make_chart() const {
  AlgebraFile af = detail::builtin_or_file(algebra);
  switch (chart) {
    case ChartKind::abelian: return GroupChart::abelian(std::move(af.algebra));
    case ChartKind::nilpotent_exp: return GroupChart::nilpotent_exp(std::move(af.algebra));
    case ChartKind::matrix_embedded:
      if (af.matrix_basis.empty()) throw InputError("scenario '" + name + "': matrix chart needs a matrix basis");
      return GroupChart::matrix_embedded(std::move(af.algebra), std::move(af.matrix_basis), chart_radius);
  }
  throw InputError("unknown chart");
}

inline Flow Scenario::make_flow() const {
  GroupChart c = make_chart();
  return mode == FlowMode::inner ? Flow::inner(std::move(c), inner) : Flow::derivation(std::move(c), derivation);
}

inline std::vector<Scenario> parse_catalog(const std::string& text) {
  std::vector<std::map<std::string, std::string>> sections;
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(detail::strip_comment(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw InputError("catalog line " + std::to_string(lineno) + ": malformed section");
      names.push_back(detail::trim(t.substr(1, t.size() - 2)));
      sections.emplace_back();
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos || sections.empty())
      throw InputError("catalog line " + std::to_string(lineno) + ": expected key = value inside a section");
    sections.back()[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
  }

  std::vector<Scenario> out;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    auto kv = sections[s];
    Scenario sc;
    sc.name = names[s];
    const std::string ctx = "scenario '" + sc.name + "'";
    auto take = [&](const std::string& key, bool required = true) {
      auto it = kv.find(key);
      if (it == kv.end()) {
        if (required) throw InputError(ctx + ": missing '" + key + "'");
        return std::string();
      }
      std::string v = it->second;
      kv.erase(it);
      return v;
    };
    sc.description = take("description", false);
    sc.algebra = take("algebra");
    sc.chart = parse_chart_kind(take("chart"));
    if (auto r = take("chart_radius", false); !r.empty()) sc.chart_radius = detail::parse_number(r, ctx + " chart_radius");
    const std::string der = take("derivation", false), inn = take("inner", false);
    if (der.empty() == inn.empty()) throw InputError(ctx + ": give exactly one of 'derivation' and 'inner'");
    const std::string window = take("window");
    sc.spacing = detail::parse_number(take("spacing"), ctx + " spacing");
    sc.eps = detail::parse_number(take("eps"), ctx + " eps");
    sc.tau = detail::parse_number(take("tau"), ctx + " tau");
    if (auto c = take("class", false); !c.empty()) sc.class_hint = parse_algebra_class(c);
    const std::string expected = take("expected");
    if (expected == "central") sc.expected = Expected::central_subgroup;
    else if (expected == "all") sc.expected = Expected::all;
    else throw InputError(ctx + ": expected must be 'central' or 'all'");
    if (auto th = take("threshold", false); !th.empty()) sc.threshold = detail::parse_number(th, ctx + " threshold");
    if (!kv.empty()) throw InputError(ctx + ": unknown key '" + kv.begin()->first + "'");

    const GroupChart chart = sc.make_chart();
    if (!der.empty()) {
      sc.mode = FlowMode::derivation;
      sc.derivation = detail::parse_rows(der, ctx + " derivation");
    } else {
      sc.mode = FlowMode::inner;
      const auto v = detail::parse_numbers(inn, ctx + " inner");
      sc.inner = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
    }
    sc.window = parse_window(detail::parse_numbers(window, ctx + " window"), chart.dim());
    (void)sc.make_flow();
    out.push_back(std::move(sc));
  }
  return out;
}

inline const std::vector<Scenario>& catalog() {
  static const std::vector<Scenario> built_in = parse_catalog(kDefaultCatalog);
  return built_in;
}

inline const Scenario& find_scenario(const std::vector<Scenario>& cat, const std::string& name) {
  for (const auto& s : cat)
    if (s.name == name) return s;
  throw InputError("unknown scenario '" + name + "'");
}

inline const Scenario& find_scenario(const std::string& name) { return find_scenario(catalog(), name); }

}  // namespace lieflow
