#pragma once

// Quotients G/H of an exp-chart group by H = exp h, h a D-invariant ideal.
// The quotient is charted on the orthogonal complement C of h: a coset
// exp(X) H has coordinates C^T X, the bracket is C^T [C a, C b] and the
// induced derivation is C^T D C.

#include <lieflow/chain.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace lieflow {

inline constexpr double kQuotientTol = 1e-9;

class QuotientMap {
 public:
  QuotientMap(const Flow& ambient, const Mat& ideal_basis) : ambient_(ambient) {
    const GroupChart& chart = ambient.chart();
    if (!chart.exp_chart()) throw UnsupportedError("quotients need an abelian or nilpotent-exp chart");
    const int n = chart.dim();
    detail::require(ideal_basis.rows() == n, "ideal basis has wrong row count");
    h_ = ideal_basis.cols() ? orthonormal_basis(ideal_basis) : Mat(n, 0);
    c_ = orthogonal_complement(h_, n);

    const LieAlgebra& alg = chart.algebra();
    for (int i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < h_.cols(); ++j)
        ideal_defect_ = std::max(ideal_defect_, residual_outside(h_, alg.bracket(alg.basis_vector(i), h_.col(j))));
    if (ideal_defect_ > kQuotientTol) throw InputError("subspace is not an ideal");
    for (Eigen::Index j = 0; j < h_.cols(); ++j)
      invariance_defect_ = std::max(invariance_defect_, residual_outside(h_, Vec(ambient.generator() * h_.col(j))));
    if (invariance_defect_ > kQuotientTol) throw InputError("ideal is not invariant under the flow generator");

    const auto m = static_cast<int>(c_.cols());
    if (m == 0) return;
    StructureConstants sc(m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const Vec br = c_.transpose() * alg.bracket(c_.col(a), c_.col(b));
        for (int k = 0; k < m; ++k) sc(a, b, k) = std::abs(br(k)) < 1e-14 ? 0.0 : br(k);
      }
    LieAlgebra q(sc);
    GroupChart qc = q.is_nilpotent() && q.nilpotency_step() > 1 ? GroupChart::nilpotent_exp(q) : GroupChart::abelian(q);
    induced_ = Flow::derivation(std::move(qc), Mat(c_.transpose() * ambient.generator() * c_));
  }

  const Flow& ambient() const { return ambient_; }
  const Mat& ideal() const { return h_; }
  const Mat& complement() const { return c_; }
  int quotient_dim() const { return static_cast<int>(c_.cols()); }
  bool trivial_quotient() const { return !induced_.has_value(); }
  double ideal_defect() const { return ideal_defect_; }
  double invariance_defect() const { return invariance_defect_; }

  const Flow& induced_flow() const {
    if (!induced_) throw UnsupportedError("quotient by the whole group is a point");
    return *induced_;
  }

  GroupElement project(const GroupElement& g) const {
    return GroupElement::from_coords(c_.transpose() * ambient_.chart().log(g));
  }

  // Section of the projection through the complement.
  GroupElement section(const GroupElement& q) const { return ambient_.chart().exp(c_ * q.coords); }

  // max over samples of d(pi(phi_t(g)), phi^_t(pi(g))).
  double intertwining_residual(int samples, double radius, std::uint64_t seed = 7) const {
    if (!induced_) return 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius), ut(-2.0, 2.0);
    const int n = ambient_.chart().dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x(i) = u(rng);
      const double t = ut(rng);
      const GroupElement g = ambient_.chart().exp(x);
      const GroupElement a = project(ambient_.apply(t, g));
      const GroupElement b = induced_->apply(t, project(g));
      worst = std::max(worst, induced_->chart().distance(a, b));
    }
    return worst;
  }

 private:
  Flow ambient_;
  Mat h_, c_;
  std::optional<Flow> induced_;
  double ideal_defect_ = 0.0, invariance_defect_ = 0.0;
};

inline const Flow& induced_flow(const QuotientMap& qm) { return qm.induced_flow(); }

inline Chain project_chain(const QuotientMap& qm, const Chain& xi) {
  check_shape(xi);
  Chain out;
  out.times = xi.times;
  for (const auto& p : xi.points) out.points.push_back(qm.project(p));
  return out;
}

// Largest eps (checked on samples) with B_R(pi(x), eps) inside pi(U x) for
// U = B(e, u_radius), using the right-invariant quotient metric
// d_R(p, q) = ||log(p q^-1)||.  Each sampled quotient point is reached by the
// minimum-norm coset solve u = exp(C log(q pi(x)^-1)).
inline double homo_witness(const QuotientMap& qm, double u_radius, int samples, double window_radius = 2.0,
                           std::uint64_t seed = 11) {
  detail::require(u_radius > 0 && samples > 0, "homo_witness needs u_radius > 0 and samples > 0");
  if (qm.trivial_quotient()) return std::numeric_limits<double>::infinity();
  const GroupChart& g = qm.ambient().chart();
  const GroupChart& q = qm.induced_flow().chart();
  const Mat& c = qm.complement();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-window_radius, window_radius);
  std::normal_distribution<double> normal;
  std::vector<std::pair<Vec, Vec>> trials;  // (x, displacement direction)
  for (int s = 0; s < samples; ++s) {
    Vec x(g.dim()), v(q.dim());
    for (int i = 0; i < g.dim(); ++i) x(i) = box(rng);
    for (int i = 0; i < q.dim(); ++i) v(i) = normal(rng);
    trials.emplace_back(x, v.normalized());
  }
  auto holds = [&](double eps) {
    for (const auto& [xc, dir] : trials) {
      const GroupElement x = g.exp(xc);
      const GroupElement px = qm.project(x);
      for (double frac : {0.5, 1.0 - 1e-9}) {
        const GroupElement target = q.mul(q.exp(frac * eps * dir), px);  // d_R(target, pi(x)) = frac * eps
        const Vec rel = q.log(q.mul(target, q.inv(px)));
        const GroupElement u = g.exp(c * rel);
        if (g.log(u).norm() >= u_radius) return false;
        if (q.distance(qm.project(g.mul(u, x)), target) > 1e-9 * (1.0 + xc.norm())) return false;
      }
    }
    return true;
  };
  for (double eps = u_radius; eps > 1e-6 * u_radius; eps *= 0.9)
    if (holds(eps)) return eps;
  return 0.0;
}

struct LiftedChain {
  Chain chain;            // from x_0^-1 to h y^-1
  GroupElement correction;  // terminal h in H
  std::vector<GroupElement> coset_steps;  // chosen h' per jump
};

// Lifts a quotient chain with the recursion h_{k+1} = h' phi_{tau_k}(h_k),
// points (x_k h_k)^-1 where x_k = exp(C zeta_k).  Each h' = exp(w), w in h,
// minimizes the jump residual ||log(x_{k+1} h' phi(x_k)^-1)|| over a grid
// around the first-order guess, growing to 10 u_radius.
inline LiftedChain lift_chain(const QuotientMap& qm, const Chain& zeta, double u_radius) {
  check_shape(zeta);
  detail::require(u_radius > 0, "lift_chain needs u_radius > 0");
  const Flow& flow = qm.ambient();
  const GroupChart& g = flow.chart();
  const Mat& h = qm.ideal();
  const auto k = h.cols();

  std::vector<GroupElement> x;
  for (const auto& p : zeta.points) x.push_back(qm.trivial_quotient() ? g.identity() : qm.section(p));

  auto residual = [&](const GroupElement& next, const GroupElement& image, const Vec& w) {
    return g.log(g.mul(g.mul(next, g.exp(h * w)), g.inv(image))).norm();
  };

  LiftedChain out;
  GroupElement hk = g.identity();
  out.chain.times = zeta.times;
  out.chain.points.push_back(g.inv(x[0]));
  for (int i = 0; i < zeta.jumps(); ++i) {
    const GroupElement image = flow.apply(zeta.times[i], x[i]);
    const Vec rel = g.log(g.mul(x[i + 1], g.inv(image)));
    Vec best_w = -(h.transpose() * rel);
    double best = residual(x[i + 1], image, best_w);
    const Vec center = best_w;
    for (double radius = u_radius / 4; best >= u_radius && radius <= 10.0 * u_radius * (1 + 1e-12); radius *= 2) {
      const int steps = 4;
      std::vector<int> lo(k, -steps), hi(k, steps), stride(k);
      for (Eigen::Index d = static_cast<Eigen::Index>(k) - 1, s = 1; d >= 0; --d) {
        stride[d] = static_cast<int>(s);
        s *= 2 * steps + 1;
      }
      std::vector<int> ids;
      detail::for_each_index(lo, hi, stride, ids);
      for (int id : ids) {
        Vec w = center;
        for (Eigen::Index d = 0; d < k; ++d) {
          const int off = (id / stride[d]) % (2 * steps + 1) - steps;
          w(d) += radius * off / steps;
        }
        const double r = residual(x[i + 1], image, w);
        if (r < best) {
          best = r;
          best_w = w;
        }
      }
    }
    if (best >= u_radius)
      throw NumericalError("no coset representative within search radius at jump " + std::to_string(i));
    const GroupElement step = g.exp(h * best_w);
    out.coset_steps.push_back(step);
    hk = g.mul(step, flow.apply(zeta.times[i], hk));
    out.chain.points.push_back(g.inv(g.mul(x[i + 1], hk)));
  }
  // terminal point is h_n^-1 x_n^-1
  out.correction = g.inv(hk);
  return out;
}

}  // namespace lieflow
