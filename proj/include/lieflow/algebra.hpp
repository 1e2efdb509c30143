#pragma once

// Finite-dimensional real Lie algebras given by structure constants in a fixed
// basis: [e_i, e_j] = sum_k c[i][j][k] e_k.

#include <lieflow/errors.hpp>
#include <lieflow/linalg.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace lieflow {

// Absolute tolerance for the structural predicates (Jacobi, Leibniz).
inline constexpr double kStructureTol = 1e-10;

// Raw rank-3 tensor, not yet validated.
struct StructureConstants {
  int dim = 0;
  std::vector<double> c;  // c[(i*dim + j)*dim + k]

  explicit StructureConstants(int n = 0) : dim(n), c(static_cast<std::size_t>(n) * n * n, 0.0) {}

  double& operator()(int i, int j, int k) { return c[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }
  double operator()(int i, int j, int k) const { return c[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }

  // Sets c[i][j][k] = v and c[j][i][k] = -v.
  void set_bracket(int i, int j, int k, double v) {
    (*this)(i, j, k) = v;
    (*this)(j, i, k) = -v;
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    Vec out = Vec::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      if (u(i) == 0.0) continue;
      for (int j = 0; j < dim; ++j) {
        const double w = u(i) * v(j);
        if (w == 0.0) continue;
        for (int k = 0; k < dim; ++k) out(k) += w * (*this)(i, j, k);
      }
    }
    return out;
  }

  double antisymmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) worst = std::max(worst, std::abs((*this)(i, j, k) + (*this)(j, i, k)));
    return worst;
  }
};

// max over basis triples of || [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] ||_inf
inline double jacobi_defect(const StructureConstants& sc) {
  const int n = sc.dim;
  double worst = 0.0;
  auto e = [n](int i) {
    Vec v = Vec::Zero(n);
    v(i) = 1.0;
    return v;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Vec s = sc.bracket(sc.bracket(e(i), e(j)), e(k)) + sc.bracket(sc.bracket(e(j), e(k)), e(i)) +
                      sc.bracket(sc.bracket(e(k), e(i)), e(j));
        worst = std::max(worst, inf_norm(s));
      }
  return worst;
}

struct DerivationCheck {
  bool ok = false;
  double defect = 0.0;
};

class LieAlgebra {
 public:
  // Validates antisymmetry and the Jacobi identity; throws InputError otherwise.
  LieAlgebra(StructureConstants sc, std::vector<std::string> labels = {})
      : sc_(std::move(sc)), labels_(std::move(labels)) {
    detail::require(sc_.dim > 0, "Lie algebra dimension must be positive");
    if (labels_.empty())
      for (int i = 0; i < sc_.dim; ++i) labels_.push_back("e" + std::to_string(i + 1));
    detail::require(static_cast<int>(labels_.size()) == sc_.dim, "label count does not match dimension");
    if (sc_.antisymmetry_defect() > kStructureTol) throw InputError("structure constants are not antisymmetric");
    if (const double jd = lieflow::jacobi_defect(sc_); jd > kStructureTol)
      throw InputError("structure constants violate the Jacobi identity (defect " + std::to_string(jd) + ")");
    ad_basis_.reserve(sc_.dim);
    for (int i = 0; i < sc_.dim; ++i) {
      Mat a = Mat::Zero(sc_.dim, sc_.dim);
      for (int j = 0; j < sc_.dim; ++j)
        for (int k = 0; k < sc_.dim; ++k) a(k, j) = sc_(i, j, k);
      ad_basis_.push_back(std::move(a));
    }
  }

  int dim() const { return sc_.dim; }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureConstants& structure_constants() const { return sc_; }

  Vec basis_vector(int i) const {
    Vec v = Vec::Zero(dim());
    v(i) = 1.0;
    return v;
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    check_dim(u);
    check_dim(v);
    Vec out = Vec::Zero(dim());
    for (int i = 0; i < dim(); ++i)
      if (u(i) != 0.0) out.noalias() += u(i) * (ad_basis_[i] * v);
    return out;
  }

  // Matrix of v -> [x, v].
  Mat ad(const Vec& x) const {
    check_dim(x);
    Mat a = Mat::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      if (x(i) != 0.0) a += x(i) * ad_basis_[i];
    return a;
  }

  const Mat& ad_basis(int i) const { return ad_basis_.at(i); }

  double jacobi_defect() const { return lieflow::jacobi_defect(sc_); }

  // Leibniz test M[e_i,e_j] = [M e_i, e_j] + [e_i, M e_j] over basis pairs.
  DerivationCheck is_derivation(const Mat& m, double tol = kStructureTol) const {
    detail::require(m.rows() == dim() && m.cols() == dim(), "derivation candidate has wrong shape");
    double worst = 0.0;
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) {
        const Vec ei = basis_vector(i);
        const Vec ej = basis_vector(j);
        const Vec lhs = m * bracket(ei, ej);
        const Vec rhs = bracket(m * ei, ej) + bracket(ei, m * ej);
        worst = std::max(worst, inf_norm(Vec(lhs - rhs)));
      }
    return {worst <= tol, worst};
  }

  Mat killing_form() const {
    Mat k(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) k(i, j) = (ad_basis_[i] * ad_basis_[j]).trace();
    return k;
  }

  // Orthonormal basis of span{[u, v] : u in span(a), v in span(b)}.
  Mat bracket_span(const Mat& a, const Mat& b) const {
    Mat cols(dim(), a.cols() * b.cols());
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) cols.col(c++) = bracket(a.col(i), b.col(j));
    return orthonormal_basis(cols);
  }

  // [g, g^(1), ...]; stops once a term is {0} or equals its predecessor (the
  // repeated term is included so stabilization is visible).
  std::vector<Mat> derived_series() const {
    std::vector<Mat> series{Mat::Identity(dim(), dim())};
    while (true) {
      const Mat& last = series.back();
      Mat next = bracket_span(last, last);
      const bool stable = next.cols() == last.cols();
      series.push_back(std::move(next));
      if (stable || series.back().cols() == 0) break;
    }
    return series;
  }

  // Lower central series of the subalgebra span(sub): L0 = sub, L_{k+1} = [sub, L_k].
  std::vector<Mat> lower_central_series(const Mat& sub) const {
    std::vector<Mat> series{orthonormal_basis(sub)};
    while (series.back().cols() > 0) {
      Mat next = bracket_span(series.front(), series.back());
      if (next.cols() == series.back().cols()) {
        series.push_back(std::move(next));
        break;
      }
      series.push_back(std::move(next));
    }
    return series;
  }

  std::vector<Mat> lower_central_series() const { return lower_central_series(Mat::Identity(dim(), dim())); }

  bool is_solvable() const { return derived_series().back().cols() == 0; }
  bool is_nilpotent() const { return lower_central_series().back().cols() == 0; }

  // Number of nonzero terms of the lower central series (1 for abelian).
  int nilpotency_step() const {
    const auto lcs = lower_central_series();
    if (lcs.back().cols() != 0) return -1;
    return static_cast<int>(lcs.size()) - 1;
  }

  // C with ||[a, b]|| <= C ||a|| ||b||: ||ad_a||_op <= ||ad_a||_F = ||M a||,
  // M the matrix whose columns are the flattened ad(e_i).
  double bracket_bound() const {
    const int n = dim();
    if (n == 0) return 0.0;
    Mat m(n * n, n);
    for (int i = 0; i < n; ++i) m.col(i) = Eigen::Map<const Vec>(ad_basis_[i].data(), n * n);
    return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
  }

  // Largest residual of [u, v] outside span(sub) over basis pairs of sub.
  double subalgebra_defect(const Mat& sub) const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < sub.cols(); ++i)
      for (Eigen::Index j = 0; j < sub.cols(); ++j)
        worst = std::max(worst, residual_outside(sub, bracket(sub.col(i), sub.col(j))));
    return worst;
  }

 private:
  void check_dim(const Vec& v) const {
    if (v.size() != dim())
      throw InputError("vector of length " + std::to_string(v.size()) + " does not belong to a " +
                       std::to_string(dim()) + "-dimensional algebra");
  }

  StructureConstants sc_;
  std::vector<std::string> labels_;
  std::vector<Mat> ad_basis_;
};

namespace algebras {

inline LieAlgebra abelian(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  return LieAlgebra(StructureConstants(n), labels);
}

// Basis X, Y, Z with [X, Y] = Z.
inline LieAlgebra heisenberg3() {
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 2, 1.0);
  return LieAlgebra(sc, {"X", "Y", "Z"});
}

// Basis H, E, F with [H, E] = 2E, [H, F] = -2F, [E, F] = H.
inline StructureConstants sl2_constants() {
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 1, 2.0);
  sc.set_bracket(0, 2, 2, -2.0);
  sc.set_bracket(1, 2, 0, 1.0);
  return sc;
}

inline LieAlgebra sl2() { return LieAlgebra(sl2_constants(), {"H", "E", "F"}); }

// Basis L1, L2, L3 with [L1, L2] = L3 and cyclic.
inline LieAlgebra so3() {
  StructureConstants sc(3);
  sc.set_bracket(0, 1, 2, 1.0);
  sc.set_bracket(1, 2, 0, 1.0);
  sc.set_bracket(2, 0, 1, 1.0);
  return LieAlgebra(sc, {"L1", "L2", "L3"});
}

// Direct sum of two algebras, basis of `a` first.
inline LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  const int n = a.dim() + b.dim();
  StructureConstants sc(n);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int k = 0; k < a.dim(); ++k) sc(i, j, k) = a.structure_constants()(i, j, k);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (int k = 0; k < b.dim(); ++k) sc(a.dim() + i, a.dim() + j, a.dim() + k) = b.structure_constants()(i, j, k);
  auto labels = a.labels();
  for (const auto& l : b.labels()) labels.push_back(l + "'");
  return LieAlgebra(sc, labels);
}

}  // namespace algebras
}  // namespace lieflow
