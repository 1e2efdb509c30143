#pragma once

// Small dense linear-algebra helpers shared by every module.  Subspaces are
// always carried as matrices with orthonormal columns (possibly zero columns
// for the trivial subspace).

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace lieflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Relative singular-value cutoff for numerical rank decisions.
inline constexpr double kRankTol = 1e-9;

inline double inf_norm(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double inf_norm(const Vec& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline Mat expm(const Mat& m) { return m.exp(); }

// Orthonormal basis of the column span of `cols`, rank decided by
// sigma_i > kRankTol * sigma_max (and sigma_max > abs_floor).
inline Mat orthonormal_basis(const Mat& cols, double abs_floor = 1e-13) {
  const auto n = cols.rows();
  if (cols.cols() == 0) return Mat(n, 0);
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= abs_floor) return Mat(n, 0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > kRankTol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

// The `k` right singular vectors of `m` belonging to its smallest singular
// values; an orthonormal basis of the numerical kernel when its dimension is
// known in advance.
inline Mat smallest_right_singular_vectors(const Mat& m, Eigen::Index k) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(k);
}

inline CMat smallest_right_singular_vectors(const CMat& m, Eigen::Index k) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(k);
}

// Orthonormal basis of the orthogonal complement of span(q) (q orthonormal).
inline Mat orthogonal_complement(const Mat& q, Eigen::Index n) {
  if (q.cols() == 0) return Mat::Identity(n, n);
  if (q.cols() == n) return Mat(n, 0);
  const Mat proj = Mat::Identity(n, n) - q * q.transpose();
  return orthonormal_basis(proj);
}

// Norm of the component of v orthogonal to span(q) (q orthonormal).
inline double residual_outside(const Mat& q, const Vec& v) {
  if (q.cols() == 0) return v.norm();
  return (v - q * (q.transpose() * v)).norm();
}

// Orthonormal basis of span(a) + span(b).
inline Mat span_union(const Mat& a, const Mat& b) {
  Mat both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return orthonormal_basis(both);
}

}  // namespace lieflow
