#pragma once

// Test-only oracle for the additive Jordan decomposition.  Spectral
// projectors come from the resolvent contour integral
//   P = (1 / 2 pi i) \oint (zI - D)^{-1} dz
// around each eigenvalue cluster, evaluated with the trapezoid rule.  This
// shares nothing with the library's kernel-based construction.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using cd = std::complex<double>;

struct JordanParts {
  Mat H, E, N;
  std::vector<cd> centers;
};

inline std::vector<cd> cluster_centers(const Mat& d, double cluster_tol) {
  Eigen::ComplexEigenSolver<CMat> es(d.cast<cd>(), false);
  const auto ev = es.eigenvalues();
  const int n = static_cast<int>(ev.size());
  std::vector<int> label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    // single linkage flood fill
    std::vector<int> todo{i};
    while (!todo.empty()) {
      const int a = todo.back();
      todo.pop_back();
      for (int b = 0; b < n; ++b)
        if (label[b] < 0 && std::abs(ev(a) - ev(b)) < cluster_tol) {
          label[b] = next;
          todo.push_back(b);
        }
    }
    ++next;
  }
  std::vector<cd> centers(next, cd(0, 0));
  std::vector<int> count(next, 0);
  for (int i = 0; i < n; ++i) {
    centers[label[i]] += ev(i);
    ++count[label[i]];
  }
  for (int c = 0; c < next; ++c) centers[c] /= static_cast<double>(count[c]);
  return centers;
}

inline CMat spectral_projector(const Mat& d, cd center, double radius, int nodes = 256) {
  const auto n = d.rows();
  const CMat dc = d.cast<cd>();
  const CMat id = CMat::Identity(n, n);
  CMat p = CMat::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / nodes;
    const cd w = radius * std::exp(cd(0, th));
    p += w * (((center + w) * id - dc).inverse());
  }
  return p / static_cast<double>(nodes);
}

inline JordanParts jordan_by_resolvent(const Mat& d, double cluster_tol = 1e-3) {
  const auto n = d.rows();
  JordanParts out;
  out.centers = cluster_centers(d, cluster_tol);
  CMat h = CMat::Zero(n, n), e = CMat::Zero(n, n);
  for (std::size_t c = 0; c < out.centers.size(); ++c) {
    double sep = 2.0;
    for (std::size_t o = 0; o < out.centers.size(); ++o)
      if (o != c) sep = std::min(sep, std::abs(out.centers[c] - out.centers[o]));
    const CMat p = spectral_projector(d, out.centers[c], 0.5 * sep);
    h += out.centers[c].real() * p;
    e += cd(0, out.centers[c].imag()) * p;
  }
  out.H = h.real();
  out.E = e.real();
  out.N = d - out.H - out.E;
  return out;
}

}  // namespace oracle
