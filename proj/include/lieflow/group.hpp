#pragma once

// Concrete connected Lie groups through one of three charts:
//   abelian        - R^n, coordinates add;
//   nilpotent-exp  - simply connected nilpotent group in exponential
//                    coordinates, product by the terminating BCH series;
//   matrix-embedded- closed matrix group near the identity, principal log chart.

#include <lieflow/algebra.hpp>
#include <lieflow/errors.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace lieflow {

enum class ChartKind { abelian, nilpotent_exp, matrix_embedded };

inline std::string to_string(ChartKind k) {
  switch (k) {
    case ChartKind::abelian: return "abelian";
    case ChartKind::nilpotent_exp: return "nilpotent-exp";
    case ChartKind::matrix_embedded: return "matrix-embedded";
  }
  return "abelian";
}

inline ChartKind parse_chart_kind(const std::string& s) {
  if (s == "abelian") return ChartKind::abelian;
  if (s == "nilpotent-exp") return ChartKind::nilpotent_exp;
  if (s == "matrix-embedded") return ChartKind::matrix_embedded;
  throw InputError("unknown chart kind '" + s + "'");
}

// Exponential-chart coordinates for abelian / nilpotent-exp charts, a concrete
// matrix for matrix-embedded ones.
struct GroupElement {
  Vec coords;
  Mat matrix;

  static GroupElement from_coords(Vec c) { return {std::move(c), {}}; }
  static GroupElement from_matrix(Mat m) { return {{}, std::move(m)}; }
  bool is_matrix() const { return matrix.size() > 0; }
};

// Largest ||x^-1 y - I||_F for which a matrix-chart distance is evaluated.
inline constexpr double kMatrixLogWindow = 0.5;

class GroupChart {
 public:
  static GroupChart abelian(int n) { return GroupChart(ChartKind::abelian, algebras::abelian(n)); }

  static GroupChart abelian(LieAlgebra alg) {
    detail::require(alg.lower_central_series().size() == 2 && alg.lower_central_series()[1].cols() == 0,
                    "abelian chart requires an abelian algebra");
    return GroupChart(ChartKind::abelian, std::move(alg));
  }

  static GroupChart nilpotent_exp(LieAlgebra alg) {
    const int step = alg.nilpotency_step();
    if (step < 0) throw InputError("nilpotent-exp chart requires a nilpotent algebra");
    if (step > 4) throw UnsupportedError("BCH product implemented through nilpotency step 4");
    return GroupChart(ChartKind::nilpotent_exp, std::move(alg));
  }

  // basis[i] is the matrix of e_i; brackets must match the structure constants.
  // window_radius bounds ||log g|| for chart queries.
  static GroupChart matrix_embedded(LieAlgebra alg, std::vector<Mat> basis, double window_radius) {
    detail::require(static_cast<int>(basis.size()) == alg.dim(), "matrix basis size does not match algebra dimension");
    detail::require(window_radius > 0, "chart window radius must be positive");
    const auto m = basis.front().rows();
    Mat flat(m * m, alg.dim());
    for (int i = 0; i < alg.dim(); ++i) {
      detail::require(basis[i].rows() == m && basis[i].cols() == m, "matrix basis elements must be square and equal size");
      flat.col(i) = Eigen::Map<const Vec>(basis[i].data(), m * m);
    }
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j) {
        Mat expect = Mat::Zero(m, m);
        const Vec br = alg.bracket(alg.basis_vector(i), alg.basis_vector(j));
        for (int k = 0; k < alg.dim(); ++k) expect += br(k) * basis[k];
        if (inf_norm(Mat(commutator(basis[i], basis[j]) - expect)) > 1e-10)
          throw InputError("matrix basis does not represent the algebra's brackets");
      }
    GroupChart c(ChartKind::matrix_embedded, std::move(alg));
    c.basis_ = std::move(basis);
    c.flat_ = std::make_shared<const Eigen::ColPivHouseholderQR<Mat>>(flat);
    detail::require(c.flat_->rank() == c.algebra().dim(), "matrix basis is linearly dependent");
    c.window_radius_ = window_radius;
    c.embed_norm_ = Eigen::JacobiSVD<Mat>(flat).singularValues()(0);
    return c;
  }

  ChartKind kind() const { return kind_; }
  int dim() const { return alg_.dim(); }
  const LieAlgebra& algebra() const { return alg_; }
  const std::vector<Mat>& matrix_basis() const { return basis_; }
  double window_radius() const { return window_radius_; }
  bool exp_chart() const { return kind_ != ChartKind::matrix_embedded; }
  int nilpotency_step() const { return step_; }

  GroupElement identity() const {
    if (exp_chart()) return GroupElement::from_coords(Vec::Zero(dim()));
    return GroupElement::from_matrix(Mat::Identity(matrix_size(), matrix_size()));
  }

  Eigen::Index matrix_size() const { return basis_.empty() ? 0 : basis_.front().rows(); }

  Mat to_matrix(const Vec& coords) const {
    Mat out = Mat::Zero(matrix_size(), matrix_size());
    for (int i = 0; i < dim(); ++i) out += coords(i) * basis_[i];
    return out;
  }

  Vec from_matrix(const Mat& m) const {
    const Vec flat = Eigen::Map<const Vec>(m.data(), m.size());
    return flat_->solve(flat);
  }

  GroupElement exp(const Vec& coords) const {
    check_coords(coords);
    if (exp_chart()) return GroupElement::from_coords(coords);
    return GroupElement::from_matrix(expm(to_matrix(coords)));
  }

  // Principal logarithm; OutOfWindowError outside the chart window.
  Vec log(const GroupElement& g) const {
    check(g);
    if (exp_chart()) return g.coords;
    const Mat l = g.matrix.log();
    if (!l.allFinite()) throw OutOfWindowError("matrix logarithm undefined");
    Vec c = from_matrix(l);
    if (c.norm() > window_radius_) throw OutOfWindowError("element lies outside the chart window");
    return c;
  }

  GroupElement mul(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    switch (kind_) {
      case ChartKind::abelian: return GroupElement::from_coords(a.coords + b.coords);
      case ChartKind::nilpotent_exp: return GroupElement::from_coords(bch(a.coords, b.coords));
      case ChartKind::matrix_embedded: return GroupElement::from_matrix(a.matrix * b.matrix);
    }
    return {};
  }

  GroupElement inv(const GroupElement& a) const {
    check(a);
    if (exp_chart()) return GroupElement::from_coords(-a.coords);
    return GroupElement::from_matrix(a.matrix.inverse());
  }

  // log(e^u e^v), exact for nilpotency step <= 4.
  Vec bch(const Vec& u, const Vec& v) const {
    if (kind_ == ChartKind::abelian || step_ <= 1) return u + v;
    const Vec uv = alg_.bracket(u, v);
    Vec z = u + v + 0.5 * uv;
    if (step_ >= 3) {
      z += (alg_.bracket(u, uv) - alg_.bracket(v, uv)) / 12.0;
      if (step_ >= 4) z -= alg_.bracket(v, alg_.bracket(u, uv)) / 24.0;
    }
    return z;
  }

  // Left-invariant distance ||log(x^-1 y)||_2.
  double distance(const GroupElement& x, const GroupElement& y) const { return relative_log(x, y).norm(); }

  // log(x^-1 y), the left-invariant displacement from x to y.
  Vec relative_log(const GroupElement& x, const GroupElement& y) const {
    check(x);
    check(y);
    switch (kind_) {
      case ChartKind::abelian: return y.coords - x.coords;
      case ChartKind::nilpotent_exp: return bch(-x.coords, y.coords);
      case ChartKind::matrix_embedded: {
        const Mat rel = x.matrix.partialPivLu().solve(y.matrix);
        const auto m = rel.rows();
        if ((rel - Mat::Identity(m, m)).norm() >= kMatrixLogWindow)
          throw OutOfWindowError("x^-1 y outside the logarithm window");
        return from_matrix(rel.log());
      }
    }
    return {};
  }

  // Screen for d(x, y) < eps in matrix charts, given x^-1: false only when
  // ||x^-1 y - I||_F >= e^{B eps} - 1, which rules the pair out because
  // ||e^L - I||_F <= e^{||L||_F} - 1 and ||L||_F <= B ||log(x^-1 y)||.
  bool may_be_within(const Mat& x_inv, const Mat& y, double eps) const {
    const Eigen::Index m = y.rows();
    const double* a = x_inv.data();
    const double* b = y.data();
    const double limit = std::expm1(embed_norm_ * eps);
    double sq = 0.0;
    for (Eigen::Index c = 0; c < m; ++c)
      for (Eigen::Index r = 0; r < m; ++r) {
        double v = r == c ? -1.0 : 0.0;
        for (Eigen::Index k = 0; k < m; ++k) v += a[k * m + r] * b[c * m + k];
        sq += v * v;
      }
    return sq < limit * limit;
  }

  // Per-axis bound on |log y - log x| over all y with d(x, y) < eps.  In
  // exp charts log(x e^w) = x + J(x) w + q(x, w) with
  // J = I + ad_x / 2 + ad_x^2 / 12 and ||q|| <= (C^2 ||x|| / 12 + C^3 ||x||^2 / 24) eps^2;
  // matrix charts fall back to coordinate_spread on every axis.
  Vec coordinate_halfwidths(const Vec& x, double eps) const {
    const int n = dim();
    if (kind_ == ChartKind::matrix_embedded) return Vec::Constant(n, coordinate_spread(x.norm(), eps));
    if (kind_ == ChartKind::abelian || step_ <= 1) return Vec::Constant(n, eps);
    const Mat ad = alg_.ad(x);
    Mat j = Mat::Identity(n, n) + 0.5 * ad;
    if (step_ >= 3) j += ad * ad / 12.0;
    const double c = bracket_bound_, r = x.norm();
    double quad = 0.0;
    if (step_ >= 3) quad += c * c * r / 12.0 * eps * eps;
    if (step_ >= 4) quad += c * c * c * r * r / 24.0 * eps * eps;
    Vec out(n);
    for (int d = 0; d < n; ++d) out(d) = eps * j.row(d).norm() + quad;
    return out * (1.0 + 1e-9) + Vec::Constant(n, 1e-12);
  }

  // Bound R(r, eps) on ||log y - log x|| over all y with ||log x|| <= r and
  // d(x, y) < eps, from the series of the left-trivialized dlog.  Returns +inf
  // when no finite bound is available.
  double coordinate_spread(double r, double eps) const {
    if (kind_ == ChartKind::abelian) return eps;
    const double c = bracket_bound_;
    auto gain = [this, c](double rho) {
      const double x = c * rho;
      if (kind_ == ChartKind::nilpotent_exp) {
        // |coefficients| of z / (1 - e^-z): 1, 1/2, 1/12, 0, -1/720
        const double coeff[] = {1.0, 0.5, 1.0 / 12.0, 0.0};
        double s = 0.0, p = 1.0;
        for (int k = 0; k < step_ && k < 4; ++k, p *= x) s += coeff[k] * p;
        return s;
      }
      if (x >= 1.9 * std::numbers::pi) return std::numeric_limits<double>::infinity();
      if (x < 1e-12) return 1.0;
      return 2.0 + 0.5 * x - 0.5 * x / std::tan(0.5 * x);
    };
    // smallest self-consistent s >= eps * gain(r + s), approached from below
    double s = eps;
    for (int it = 0; it < 200; ++it) {
      const double candidate = s * 1.000001;
      const double need = eps * gain(r + candidate);
      if (!std::isfinite(need)) break;
      if (need <= candidate) return candidate;
      s = need;
    }
    return std::numeric_limits<double>::infinity();
  }

  void check(const GroupElement& g) const {
    if (exp_chart()) {
      if (g.is_matrix() || g.coords.size() != dim()) throw InputError("group element does not belong to this chart");
    } else if (!g.is_matrix() || g.matrix.rows() != matrix_size() || g.matrix.cols() != matrix_size()) {
      throw InputError("group element does not belong to this chart");
    }
  }

 private:
  GroupChart(ChartKind kind, LieAlgebra alg) : kind_(kind), alg_(std::move(alg)) {
    step_ = kind == ChartKind::abelian ? 1 : alg_.nilpotency_step();
    bracket_bound_ = alg_.bracket_bound();
  }

  void check_coords(const Vec& c) const {
    if (c.size() != dim()) throw InputError("coordinate vector has wrong length");
  }

  ChartKind kind_;
  LieAlgebra alg_;
  int step_ = 1;
  double bracket_bound_ = 0.0;
  std::vector<Mat> basis_;
  std::shared_ptr<const Eigen::ColPivHouseholderQR<Mat>> flat_;
  double window_radius_ = std::numeric_limits<double>::infinity();
  double embed_norm_ = 1.0;  // largest singular value of coordinates -> matrix
};

namespace groups {

inline GroupChart sl2_chart(double window_radius = 1.0) {
  Mat h(2, 2), e(2, 2), f(2, 2);
  h << 1, 0, 0, -1;
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  return GroupChart::matrix_embedded(algebras::sl2(), {h, e, f}, window_radius);
}

// SO(3) with L_i the infinitesimal rotation about axis i.
inline GroupChart so3_chart(double window_radius = 1.5) {
  Mat l1 = Mat::Zero(3, 3), l2 = Mat::Zero(3, 3), l3 = Mat::Zero(3, 3);
  l1(2, 1) = 1;
  l1(1, 2) = -1;
  l2(0, 2) = 1;
  l2(2, 0) = -1;
  l3(1, 0) = 1;
  l3(0, 1) = -1;
  return GroupChart::matrix_embedded(algebras::so3(), {l1, l2, l3}, window_radius);
}

}  // namespace groups
}  // namespace lieflow
