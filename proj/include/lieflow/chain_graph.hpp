#pragma once

// Sampled (eps, tau)-chain graph on a coordinate grid: edge i -> j iff
// d(phi_tau(x_i), x_j) < eps.  Recurrence is read off the strongly connected
// components; Omega(x) is forward reachability.

#include <lieflow/chain.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <queue>
#include <string>
#include <thread>
#include <vector>

namespace lieflow {

// Axis-aligned box in chart coordinates.
struct Window {
  Vec lo, hi;

  static Window cube(int dim, double radius) { return {Vec::Constant(dim, -radius), Vec::Constant(dim, radius)}; }
  int dim() const { return static_cast<int>(lo.size()); }
  // Distance from c to the box boundary along the coordinate axes (negative outside).
  double inset(const Vec& c) const {
    double best = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dim(); ++d) best = std::min({best, c(d) - lo(d), hi(d) - c(d)});
    return best;
  }
};

struct GraphOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  int drift_steps = 8;
};

struct ChainGraph {
  double eps = 0.0, tau = 0.0, spacing = 0.0;
  Window window;
  std::vector<int> shape;  // nodes per axis
  std::vector<Vec> coords;
  std::vector<GroupElement> nodes;
  std::vector<std::vector<int>> adj;  // ascending targets
  std::vector<char> interior;
  std::vector<double> drift;             // sampled coordinate speed over [0, tau]
  std::vector<double> central_distance;  // NaN when undefined
  bool warning = false;                  // eps < spacing / 2
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(nodes.size()); }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& a : adj) n += a.size();
    return n;
  }
  bool has_edge(int i, int j) const { return std::binary_search(adj[i].begin(), adj[i].end(), j); }
  int interior_count() const { return static_cast<int>(std::count(interior.begin(), interior.end(), 1)); }
};

namespace detail {

// First grid coordinate as an exact multiple of the spacing when possible, so
// that on-axis nodes land exactly on zero.
inline double grid_base(double lo, double spacing) {
  const double b = lo / spacing;
  return std::abs(b - std::round(b)) < 1e-9 ? std::round(b) : b;
}

inline void for_each_index(const std::vector<int>& lo, const std::vector<int>& hi, const std::vector<int>& stride,
                           std::vector<int>& out) {
  const std::size_t d = lo.size();
  for (std::size_t k = 0; k < d; ++k)
    if (lo[k] > hi[k]) return;
  std::vector<int> cur = lo;
  while (true) {
    int idx = 0;
    for (std::size_t k = 0; k < d; ++k) idx += cur[k] * stride[k];
    out.push_back(idx);
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++cur[k] <= hi[k]) break;
      cur[k] = lo[k];
      if (k == 0) return;
    }
    if (d == 0) return;
  }
}

template <class Fn>
void parallel_for(int n, unsigned threads, Fn fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(n, 1)));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline ChainGraph build_chain_graph(const Flow& flow, const Window& window, double spacing, double eps, double tau,
                                    const GraphOptions& opt = {}) {
  const GroupChart& chart = flow.chart();
  const int dim = chart.dim();
  detail::require(eps > 0 && tau > 0 && spacing > 0, "chain graph needs eps, tau, spacing > 0");
  detail::require(window.dim() == dim, "window dimension does not match the group");
  detail::require((window.hi.array() >= window.lo.array()).all(), "window has hi < lo");

  ChainGraph g;
  g.eps = eps;
  g.tau = tau;
  g.spacing = spacing;
  g.window = window;
  std::vector<double> base(dim);
  std::vector<int> stride(dim);
  long long total = 1;
  for (int d = 0; d < dim; ++d) {
    base[d] = detail::grid_base(window.lo(d), spacing);
    g.shape.push_back(static_cast<int>(std::floor((window.hi(d) - window.lo(d)) / spacing + 1e-9)) + 1);
    total *= g.shape.back();
    detail::require(total <= 50'000'000, "grid too large");
  }
  detail::require(total > 0, "empty grid");
  for (int d = dim - 1, s = 1; d >= 0; --d) {
    stride[d] = s;
    s *= g.shape[d];
  }
  if (eps < spacing / 2) {
    g.warning = true;
    g.warnings.push_back("eps below spacing/2: graph is close to trivially disconnected");
  }

  const int n = static_cast<int>(total);
  g.coords.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec c(dim);
    for (int d = 0, rem = i; d < dim; ++d) {
      c(d) = (base[d] + rem / stride[d]) * spacing;
      rem %= stride[d];
    }
    g.coords[i] = std::move(c);
  }
  g.nodes.resize(n);
  g.adj.resize(n);
  g.interior.assign(n, 0);
  g.drift.assign(n, 0.0);
  g.central_distance.assign(n, std::numeric_limits<double>::quiet_NaN());

  const FlowMap phi = flow.at(tau);
  std::vector<Mat> velocity;  // G e^{tG} for the drift samples
  for (int s = 0; s <= opt.drift_steps; ++s)
    velocity.push_back(flow.generator() * expm(tau * s / opt.drift_steps * flow.generator()));
  for (int i = 0; i < n; ++i) g.nodes[i] = chart.exp(g.coords[i]);

  detail::parallel_for(n, opt.threads, [&](int i) {
    const Vec& c = g.coords[i];
    double drift = 0.0;
    for (const auto& v : velocity) drift = std::max(drift, Vec(v * c).norm());
    g.drift[i] = drift;
    g.interior[i] = window.inset(c) > eps + tau * drift ? 1 : 0;
    try {
      g.central_distance[i] = central_distance(flow, g.nodes[i]);
    } catch (const OutOfWindowError&) {
    }

    GroupElement y;
    Vec yc;
    try {
      y = phi(g.nodes[i]);
      yc = chart.log(y);
    } catch (const OutOfWindowError&) {
      return;
    }
    const Vec half = chart.coordinate_halfwidths(yc, eps);
    std::vector<int> lo(dim), hi(dim), cand;
    for (int d = 0; d < dim; ++d) {
      if (std::isfinite(half(d))) {
        lo[d] = std::max(0, static_cast<int>(std::ceil((yc(d) - half(d)) / spacing - base[d] - 1e-9)));
        hi[d] = std::min(g.shape[d] - 1, static_cast<int>(std::floor((yc(d) + half(d)) / spacing - base[d] + 1e-9)));
      } else {
        lo[d] = 0;
        hi[d] = g.shape[d] - 1;
      }
    }
    detail::for_each_index(lo, hi, stride, cand);
    auto& out = g.adj[i];
    const Mat y_inv = y.is_matrix() ? Mat(y.matrix.inverse()) : Mat();
    for (int j : cand) {
      if (y.is_matrix() && !chart.may_be_within(y_inv, g.nodes[j].matrix, eps)) continue;
      try {
        if (chart.distance(y, g.nodes[j]) < eps) out.push_back(j);
      } catch (const OutOfWindowError&) {
      }
    }
  });
  return g;
}

inline ChainGraph transpose(const ChainGraph& g) {
  ChainGraph t = g;
  for (auto& a : t.adj) a.clear();
  for (int i = 0; i < g.size(); ++i)
    for (int j : g.adj[i]) t.adj[j].push_back(i);
  return t;
}

struct SccResult {
  std::vector<int> component;               // node -> class id
  std::vector<std::vector<int>> classes;    // ascending node lists, in discovery order
  std::vector<char> cyclic;                 // class has a cycle
};

// Iterative Tarjan; roots and successors visited in ascending order.
inline SccResult strongly_connected_components(const ChainGraph& g) {
  const int n = g.size();
  SccResult r;
  r.component.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::pair<int, std::size_t>> call;
  int next = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < g.adj[v].size()) {
        const int w = g.adj[v][pos++];
        if (index[w] < 0) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<int> cls;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          r.component[w] = static_cast<int>(r.classes.size());
          cls.push_back(w);
        } while (w != done);
        std::sort(cls.begin(), cls.end());
        r.cyclic.push_back(cls.size() > 1 || g.has_edge(done, done));
        r.classes.push_back(std::move(cls));
      }
    }
  }
  return r;
}

struct RecurrenceReport {
  std::vector<int> recurrent;                  // ascending, interior only
  std::vector<std::vector<int>> components;    // recurrent nodes grouped by class
  double max_central_distance = 0.0;           // over recurrent nodes
  double eps = 0.0, tau = 0.0, spacing = 0.0;
  Window window;
};

inline RecurrenceReport recurrent_estimate(const ChainGraph& g, const SccResult& scc) {
  RecurrenceReport r;
  r.eps = g.eps;
  r.tau = g.tau;
  r.spacing = g.spacing;
  r.window = g.window;
  for (std::size_t c = 0; c < scc.classes.size(); ++c) {
    if (!scc.cyclic[c]) continue;
    std::vector<int> part;
    for (int v : scc.classes[c])
      if (g.interior[v]) part.push_back(v);
    if (part.empty()) continue;
    r.recurrent.insert(r.recurrent.end(), part.begin(), part.end());
    r.components.push_back(std::move(part));
  }
  std::sort(r.recurrent.begin(), r.recurrent.end());
  std::sort(r.components.begin(), r.components.end());
  for (int v : r.recurrent)
    if (std::isfinite(g.central_distance[v])) r.max_central_distance = std::max(r.max_central_distance, g.central_distance[v]);
  return r;
}

inline RecurrenceReport recurrent_estimate(const ChainGraph& g) {
  return recurrent_estimate(g, strongly_connected_components(g));
}

// Nodes reachable from x by at least one edge, ascending.
inline std::vector<int> omega_estimate(const ChainGraph& g, int x) {
  if (x < 0 || x >= g.size()) throw InputError("unknown node " + std::to_string(x));
  std::vector<char> seen(g.size(), 0);
  std::queue<int> q;
  for (int w : g.adj[x])
    if (!seen[w]) {
      seen[w] = 1;
      q.push(w);
    }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : g.adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i)
    if (seen[i]) out.push_back(i);
  return out;
}

inline Chain extract_chain(const ChainGraph& g, const std::vector<int>& path) {
  detail::require(path.size() >= 2, "a path needs at least two nodes");
  Chain c;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int v = path[k];
    if (v < 0 || v >= g.size()) throw InputError("unknown node " + std::to_string(v));
    if (k + 1 < path.size() && !g.has_edge(v, path[k + 1]))
      throw InputError("no edge " + std::to_string(v) + " -> " + std::to_string(path[k + 1]));
    c.points.push_back(g.nodes[v]);
    if (k + 1 < path.size()) c.times.push_back(g.tau);
  }
  return c;
}

// Shortest path from a to b (>= 1 edge); empty if unreachable.
inline std::vector<int> shortest_path(const ChainGraph& g, int a, int b) {
  std::vector<int> parent(g.size(), -2);
  std::queue<int> q;
  for (int w : g.adj[a])
    if (parent[w] == -2) {
      parent[w] = -1;
      q.push(w);
    }
  while (!q.empty() && parent[b] == -2) {
    const int v = q.front();
    q.pop();
    for (int w : g.adj[v])
      if (parent[w] == -2) {
        parent[w] = v;
        q.push(w);
      }
  }
  if (parent[b] == -2) return {};
  std::vector<int> path{b};
  for (int v = parent[b]; v != -1; v = parent[v]) path.push_back(v);
  path.push_back(a);
  std::reverse(path.begin(), path.end());
  return path;
}

// Largest share of interior nodes lying in one strongly connected class.
inline double mutual_reachability_fraction(const ChainGraph& g, const SccResult& scc) {
  const int total = g.interior_count();
  if (total == 0) return 0.0;
  int best = 0;
  for (const auto& cls : scc.classes) {
    int k = 0;
    for (int v : cls) k += g.interior[v];
    best = std::max(best, k);
  }
  return static_cast<double>(best) / total;
}

inline int nearest_node(const ChainGraph& g, const Vec& c) {
  int idx = 0;
  for (int d = 0; d < g.window.dim(); ++d) {
    const double base = detail::grid_base(g.window.lo(d), g.spacing);
    const int k = std::clamp(static_cast<int>(std::lround(c(d) / g.spacing - base)), 0, g.shape[d] - 1);
    idx = idx * g.shape[d] + k;
  }
  return idx;
}

// Hausdorff distance between two node subsets of grids over the same window
// (infinite if exactly one is empty).
inline double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto one_way = [](const std::vector<Vec>& p, const std::vector<Vec>& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, (x - y).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

inline std::vector<Vec> node_coords(const ChainGraph& g, const std::vector<int>& ids) {
  std::vector<Vec> out;
  for (int v : ids) out.push_back(g.coords[v]);
  return out;
}

}  // namespace lieflow
