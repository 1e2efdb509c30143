#pragma once

// Flows of automorphisms phi_t on a charted group, either from a derivation D
// (exp charts: phi_t = exp o e^{tD} o log) or inner, phi_t = C_{exp(tX)}
// (matrix charts).  In both cases log phi_t(g) = e^{tG} log g inside the chart
// window, with G = D or ad(X); G is exposed as generator().

#include <lieflow/grading.hpp>
#include <lieflow/group.hpp>
#include <lieflow/jordan.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace lieflow {

enum class FlowMode { derivation, inner };

inline std::string to_string(FlowMode m) { return m == FlowMode::derivation ? "derivation" : "inner"; }

class Flow;

// phi_t for one fixed t, with the exponentials precomputed.
class FlowMap {
 public:
  GroupElement operator()(const GroupElement& g) const {
    chart_->check(g);
    if (chart_->exp_chart()) return GroupElement::from_coords(coord_map_ * g.coords);
    return GroupElement::from_matrix(left_ * g.matrix * right_);
  }
  const Mat& coordinate_map() const { return coord_map_; }

 private:
  friend class Flow;
  std::shared_ptr<const GroupChart> chart_;
  Mat coord_map_;
  Mat left_, right_;
};

class Flow {
 public:
  static Flow derivation(GroupChart chart, Mat d) {
    if (!chart.exp_chart()) throw UnsupportedError("derivation-mode flows need an abelian or nilpotent-exp chart");
    detail::require(d.rows() == chart.dim() && d.cols() == chart.dim(), "derivation has wrong shape");
    const auto chk = chart.algebra().is_derivation(d);
    if (!chk.ok) throw InputError("matrix is not a derivation (defect " + std::to_string(chk.defect) + ")");
    Flow f(std::move(chart), FlowMode::derivation, d);
    return f;
  }

  static Flow inner(GroupChart chart, Vec x) {
    if (chart.exp_chart()) throw UnsupportedError("inner flows need a matrix-embedded chart");
    detail::require(x.size() == chart.dim(), "inner element has wrong length");
    Mat g = chart.algebra().ad(x);
    Flow f(std::move(chart), FlowMode::inner, g);
    f.x_ = std::move(x);
    f.x_matrix_ = f.chart_->to_matrix(f.x_);
    return f;
  }

  const GroupChart& chart() const { return *chart_; }
  FlowMode mode() const { return mode_; }
  const Mat& generator() const { return gen_; }
  const Vec& inner_element() const { return x_; }
  const JordanDecomposition& jordan() const { return jordan_; }
  const TriDecomposition& tri() const { return tri_; }

  // phi*_t = phi_{-t}
  Flow reversed() const {
    if (mode_ == FlowMode::inner) return inner(*chart_, -x_);
    return derivation(*chart_, -gen_);
  }

  FlowMap at(double t) const {
    FlowMap m;
    m.chart_ = chart_;
    m.coord_map_ = expm(t * gen_);
    if (mode_ == FlowMode::inner) {
      m.left_ = expm(t * x_matrix_);
      m.right_ = expm(-t * x_matrix_);
    }
    return m;
  }

  GroupElement apply(double t, const GroupElement& g) const { return at(t)(g); }

  // sup over t in [0, tau] of the coordinate velocity ||G e^{tG} w||, sampled.
  double drift(const Vec& w, double tau, int steps = 8) const {
    double best = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double t = tau * i / steps;
      best = std::max(best, Vec(gen_ * (expm(t * gen_) * w)).norm());
    }
    return best;
  }

 private:
  Flow(GroupChart chart, FlowMode mode, Mat gen)
      : chart_(std::make_shared<const GroupChart>(std::move(chart))), mode_(mode), gen_(std::move(gen)) {
    jordan_ = jordan_additive(gen_);
    tri_ = tri_decomposition(chart_->algebra(), jordan_);
  }

  std::shared_ptr<const GroupChart> chart_;
  FlowMode mode_;
  Mat gen_;
  Vec x_;
  Mat x_matrix_;
  JordanDecomposition jordan_;
  TriDecomposition tri_;
};

inline GroupElement group_mul(const GroupChart& chart, const GroupElement& a, const GroupElement& b) {
  return chart.mul(a, b);
}

inline GroupElement group_inv(const GroupChart& chart, const GroupElement& a) { return chart.inv(a); }

inline GroupElement flow_apply(const Flow& flow, double t, const GroupElement& g) { return flow.apply(t, g); }

inline double left_invariant_distance(const GroupChart& chart, const GroupElement& x, const GroupElement& y) {
  return chart.distance(x, y);
}

// Norm of the component of log g orthogonal to g0.
inline double central_distance(const Flow& flow, const GroupElement& g) {
  return residual_outside(flow.tri().zero, flow.chart().log(g));
}

// Flow of phi o psi for commuting generators.
inline Flow compose_flows(const Flow& phi, const Flow& psi) {
  detail::require(phi.mode() == psi.mode(), "composed flows must share a mode");
  if (phi.mode() == FlowMode::inner) return Flow::inner(phi.chart(), phi.inner_element() + psi.inner_element());
  return Flow::derivation(phi.chart(), phi.generator() + psi.generator());
}

struct Factorization {
  GroupElement unstable;  // in G+
  GroupElement central;   // in G0
  GroupElement stable;    // in G-
  double residual = 0.0;  // d(g, u c s)
  int iterations = 0;
};

// g = u c s with log u in g+, log c in g0, log s in g-, by Newton's method on
// exponential coordinates.  Exp charts are solvable, hence decomposable.
inline Factorization factorize(const Flow& flow, const GroupElement& g) {
  const GroupChart& chart = flow.chart();
  if (!chart.exp_chart())
    throw UnsupportedError("factorization needs an abelian or nilpotent-exp chart (decomposable group)");
  chart.check(g);
  const TriDecomposition& tri = flow.tri();
  const int n = chart.dim();
  const auto kp = tri.plus.cols(), kz = tri.zero.cols(), km = tri.minus.cols();
  Mat basis(n, n);
  basis << tri.plus, tri.zero, tri.minus;

  auto product = [&](const Vec& x) {
    const Vec u = tri.plus * x.head(kp);
    const Vec c = tri.zero * x.segment(kp, kz);
    const Vec s = tri.minus * x.tail(km);
    return chart.bch(chart.bch(u, c), s);
  };

  const Vec target = g.coords;
  Vec x = basis.partialPivLu().solve(target);
  Factorization out;
  for (int it = 1; it <= 50; ++it) {
    const Vec f = product(x) - target;
    Mat jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(x(j)));
      Vec xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      jac.col(j) = (product(xp) - product(xm)) / (2.0 * h);
    }
    const Vec step = jac.partialPivLu().solve(f);
    x -= step;
    out.iterations = it;
    if (step.norm() <= 1e-12 * (1.0 + x.norm())) break;
    if (it == 50) throw NumericalError("factorization Newton iteration did not converge");
  }
  out.unstable = GroupElement::from_coords(tri.plus * x.head(kp));
  out.central = GroupElement::from_coords(tri.zero * x.segment(kp, kz));
  out.stable = GroupElement::from_coords(tri.minus * x.tail(km));
  out.residual = chart.distance(g, chart.mul(chart.mul(out.unstable, out.central), out.stable));
  return out;
}

struct UniformNeighborhoodReport {
  bool passed = false;
  bool trivial = false;  // g- = 0, so A = G
  double rho = 0.0;      // largest tested radius with xU inside A for every sample
  double tau = 0.0;
  double v_radius = 0.0;
  int samples = 0;
  std::vector<std::pair<double, double>> tau_scan;  // (tau', rho) for tau' in [0, tau]
  double tau0 = std::numeric_limits<double>::quiet_NaN();  // smallest scanned tau' from which every later one passes
};

namespace detail {

// Largest rho in a geometric ladder below v_radius such that every sampled
// x in G^{+,0} phi_tau(V) has x exp(rho * dir) inside A = G^{+,0} V.
inline double uniform_radius(const Flow& flow, double v_radius, double tau, int samples, double slice_radius,
                             std::uint64_t seed) {
  const GroupChart& chart = flow.chart();
  const TriDecomposition& tri = flow.tri();
  const int n = chart.dim();
  const auto km = tri.minus.cols();
  Mat center(n, tri.plus.cols() + tri.zero.cols());
  center << tri.plus, tri.zero;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  auto random_in_ball = [&](Eigen::Index k, double radius, bool on_sphere) {
    Vec v(k);
    for (Eigen::Index i = 0; i < k; ++i) v(i) = normal(rng);
    if (k == 0 || v.norm() == 0.0) return Vec(Vec::Zero(k));
    const double r = on_sphere ? radius : radius * std::pow(unit(rng), 1.0 / static_cast<double>(k));
    return Vec(v.normalized() * r);
  };

  const FlowMap phi = flow.at(tau);
  std::vector<GroupElement> points;
  for (int i = 0; i < samples; ++i) {
    const GroupElement w = chart.exp(center * random_in_ball(center.cols(), slice_radius, false));
    const GroupElement v = chart.exp(tri.minus * random_in_ball(km, v_radius, i % 2 == 0));
    points.push_back(chart.mul(w, phi(v)));
  }
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  for (Eigen::Index i = 0; i < km; ++i) {
    dirs.push_back(tri.minus.col(i));
    dirs.push_back(-tri.minus.col(i));
  }
  for (int i = 0; i < 8; ++i) dirs.push_back(random_in_ball(n, 1.0, true));

  // membership in A: the stable factor lies in V
  auto inside = [&](const GroupElement& y) {
    return chart.log(factorize(flow, y).stable).norm() <= v_radius * (1.0 + 1e-12);
  };
  for (double rho = v_radius; rho > 1e-3 * v_radius; rho *= 0.9) {
    bool ok = true;
    for (const auto& x : points) {
      for (const auto& d : dirs) {
        if (!inside(chart.mul(x, chart.exp(rho * d)))) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return rho;
  }
  return 0.0;
}

}  // namespace detail

// Right-uniform-neighborhood check for A = G^{+,0} V, V the closed ball of
// radius v_radius in G-, against phi_tau(A).
inline UniformNeighborhoodReport uniform_neighborhood_check(const Flow& flow, double v_radius, double tau, int samples,
                                                            std::uint64_t seed = 1, double slice_radius = 1.0) {
  detail::require(v_radius > 0 && samples > 0 && tau >= 0, "uniform check needs v_radius > 0, tau >= 0, samples > 0");
  if (!flow.chart().exp_chart()) throw UnsupportedError("uniform check needs a decomposable exp-chart group");
  UniformNeighborhoodReport r;
  r.tau = tau;
  r.v_radius = v_radius;
  r.samples = samples;
  if (flow.tri().minus.cols() == 0) {
    r.trivial = true;
    r.passed = true;
    r.rho = std::numeric_limits<double>::infinity();
    return r;
  }
  r.rho = detail::uniform_radius(flow, v_radius, tau, samples, slice_radius, seed);
  r.passed = r.rho > 0.0;
  const int scan_steps = 4;
  for (int i = 0; i <= scan_steps; ++i) {
    const double t = tau * i / scan_steps;
    const double rho = i == scan_steps ? r.rho : detail::uniform_radius(flow, v_radius, t, samples, slice_radius, seed);
    r.tau_scan.emplace_back(t, rho);
  }
  for (auto it = r.tau_scan.rbegin(); it != r.tau_scan.rend() && it->second > 0.0; ++it) r.tau0 = it->first;
  return r;
}

}  // namespace lieflow
