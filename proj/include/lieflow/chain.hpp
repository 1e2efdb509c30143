#pragma once

// (eps, tau)-chains xi = {n; x_0..x_n, tau_0..tau_{n-1}} for a flow of
// automorphisms, measured with the left-invariant chart metric: the jump
// residual of step i is d(phi_{tau_i}(x_i), x_{i+1}).

#include <lieflow/flow.hpp>

#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace lieflow {

struct Chain {
  std::vector<GroupElement> points;
  std::vector<double> times;

  int jumps() const { return static_cast<int>(times.size()); }
  double total_time() const { return std::accumulate(times.begin(), times.end(), 0.0); }
  const GroupElement& front() const { return points.front(); }
  const GroupElement& back() const { return points.back(); }
};

struct ChainValidation {
  bool valid = false;
  double max_residual = 0.0;
  std::vector<double> residuals;
  std::string reason;
};

inline void check_shape(const Chain& xi) {
  detail::require(xi.jumps() >= 1, "a chain needs at least one jump");
  detail::require(xi.points.size() == xi.times.size() + 1, "a chain with n jumps needs n + 1 points");
}

inline std::vector<double> jump_residuals(const Flow& flow, const Chain& xi) {
  check_shape(xi);
  std::vector<double> out;
  out.reserve(xi.times.size());
  for (int i = 0; i < xi.jumps(); ++i)
    out.push_back(flow.chart().distance(flow.apply(xi.times[i], xi.points[i]), xi.points[i + 1]));
  return out;
}

// Valid iff every tau_i >= tau and every jump residual < eps.
inline ChainValidation validate_chain(const Flow& flow, const Chain& xi, double eps, double tau) {
  check_shape(xi);
  ChainValidation v;
  for (double t : xi.times)
    if (t < tau * (1.0 - 1e-12)) {
      v.reason = "jump time " + std::to_string(t) + " below tau " + std::to_string(tau);
      return v;
    }
  try {
    v.residuals = jump_residuals(flow, xi);
  } catch (const OutOfWindowError& e) {
    v.reason = std::string("out of window: ") + e.what();
    return v;
  }
  for (double r : v.residuals) v.max_residual = std::max(v.max_residual, r);
  v.valid = v.max_residual < eps;
  if (!v.valid) v.reason = "jump residual " + std::to_string(v.max_residual) + " not below eps";
  return v;
}

// xi v xi'; requires the last point of a to equal the first point of b.
inline Chain concatenate(const GroupChart& chart, const Chain& a, const Chain& b) {
  check_shape(a);
  check_shape(b);
  double gap = 0.0;
  try {
    gap = chart.distance(a.back(), b.front());
  } catch (const OutOfWindowError&) {
    gap = std::numeric_limits<double>::infinity();
  }
  if (!(gap <= 1e-12)) throw InputError("cannot concatenate: endpoints differ");
  Chain out = a;
  out.points.insert(out.points.end(), b.points.begin() + 1, b.points.end());
  out.times.insert(out.times.end(), b.times.begin(), b.times.end());
  return out;
}

// The exact orbit segment {1; x, phi_t(x), t}.
inline Chain orbit_segment(const Flow& flow, const GroupElement& x, double t) {
  return Chain{{x, flow.apply(t, x)}, {t}};
}

struct TranslatedChains {
  Chain left;   // from g x to phi_T(g) y
  Chain right;  // from phi_{-T}(g) x to g y
};

// Left translates of a chain from x to y with total time T; both keep every
// jump residual of xi because g_{i+1}^-1 phi_{tau_i}(g_i) = x_{i+1}^-1 phi_{tau_i}(x_i).
inline TranslatedChains translate_chain(const Flow& flow, const Chain& xi, const GroupElement& g) {
  check_shape(xi);
  const GroupChart& chart = flow.chart();
  const int n = xi.jumps();
  TranslatedChains out;
  out.left.times = xi.times;
  out.right.times = xi.times;
  double elapsed = 0.0;
  for (int i = 0; i <= n; ++i) {
    out.left.points.push_back(chart.mul(flow.apply(elapsed, g), xi.points[i]));
    if (i < n) elapsed += xi.times[i];
  }
  double remaining = xi.total_time();
  for (int i = 0; i <= n; ++i) {
    out.right.points.push_back(chart.mul(flow.apply(-remaining, g), xi.points[i]));
    if (i < n) remaining -= xi.times[i];
  }
  out.right.points.back() = chart.mul(g, xi.points.back());
  return out;
}

// Splits every jump longer than 2 tau into equal pieces in [tau, 2 tau] with
// zero-residual orbit waypoints; the residual moves to the last piece.
inline Chain normalize_jump_times(const Flow& flow, const Chain& xi, double tau) {
  check_shape(xi);
  Chain out;
  out.points.push_back(xi.points.front());
  for (int i = 0; i < xi.jumps(); ++i) {
    const double t = xi.times[i];
    if (t < tau * (1.0 - 1e-12)) throw InputError("jump time below tau; cannot normalize");
    const int pieces = std::max(1, static_cast<int>(std::floor(t / tau)));
    const double piece = t / pieces;
    GroupElement cur = xi.points[i];
    const FlowMap step = flow.at(piece);
    for (int k = 0; k + 1 < pieces; ++k) {
      cur = step(cur);
      out.points.push_back(cur);
      out.times.push_back(piece);
    }
    out.points.push_back(xi.points[i + 1]);
    out.times.push_back(piece);
  }
  return out;
}

struct ReversedChain {
  Chain chain;             // chain for the reverse flow phi*
  double eps_prime = 0.0;  // level at which it is valid
  double distortion = 0.0; // sup_{t in [-2 tau, 0]} ||e^{tG}||
};

// Reverse chain y_i = x_{n-i} for phi*_t = phi_{-t}.  An input valid at
// (eps, tau) yields an output valid at eps' = eps * sup ||e^{tG}|| over
// t in [-2 tau, 0] (the sampled sup includes every actual jump time).
inline ReversedChain reverse_chain(const Flow& flow, const Chain& xi, double eps, double tau) {
  detail::require(eps > 0 && tau > 0, "reverse_chain needs eps > 0 and tau > 0");
  const Chain norm = normalize_jump_times(flow, xi, tau);
  ReversedChain out;
  out.chain.points.assign(norm.points.rbegin(), norm.points.rend());
  out.chain.times.assign(norm.times.rbegin(), norm.times.rend());

  const Mat& g = flow.generator();
  std::vector<double> ts;
  for (int k = 0; k <= 200; ++k) ts.push_back(-2.0 * tau * k / 200.0);
  for (double t : norm.times) ts.push_back(-t);
  for (double t : ts) out.distortion = std::max(out.distortion, op_norm(expm(t * g)));
  out.eps_prime = eps * out.distortion * (1.0 + 1e-9);
  return out;
}

// Transports a chain of phi to a chain of phi o psi for an elliptic psi that
// commutes with phi: y_0 = x_0, y_i = psi_{tau_0 + ... + tau_{i-1}}(x_i).
inline Chain elliptic_compose_chain(const Flow& phi, const Flow& psi, const Chain& xi) {
  check_shape(xi);
  if (!is_elliptic_or_zero(psi.generator())) throw InputError("psi must be elliptic");
  if (phi.mode() != psi.mode()) throw InputError("phi and psi must share a chart and mode");
  const GroupChart& chart = phi.chart();
  const Mat defect = commutator(phi.generator(), psi.generator());
  if (inf_norm(defect) > 1e-9) throw InputError("psi does not commute with phi");
  // sampled commutation check at the group level
  for (int k = 0; k < 4; ++k) {
    const GroupElement& x = xi.points[static_cast<std::size_t>(k) % xi.points.size()];
    const double t = 0.3 * (k + 1), s = -0.7 * (k + 1);
    const GroupElement a = phi.apply(t, psi.apply(s, x));
    const GroupElement b = psi.apply(s, phi.apply(t, x));
    double gap = 0.0;
    try {
      gap = chart.distance(a, b);
    } catch (const OutOfWindowError&) {
      gap = std::numeric_limits<double>::infinity();
    }
    if (gap > 1e-9) throw InputError("psi does not commute with phi on sampled points");
  }
  Chain out;
  out.times = xi.times;
  double elapsed = 0.0;
  for (int i = 0; i <= xi.jumps(); ++i) {
    out.points.push_back(i == 0 ? xi.points[0] : psi.apply(elapsed, xi.points[i]));
    if (i < xi.jumps()) elapsed += xi.times[i];
  }
  return out;
}

}  // namespace lieflow
