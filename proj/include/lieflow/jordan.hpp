#pragma once

// Real additive Jordan-Chevalley decomposition D = H + E + N of a linear map:
// H semisimple with real spectrum, E semisimple with imaginary spectrum, N
// nilpotent, all commuting.

#include <lieflow/errors.hpp>
#include <lieflow/linalg.hpp>

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

namespace lieflow {

// One eigenvalue cluster.  Complex clusters are stored once, with Im > 0, and
// their basis spans the real generalized eigenspace of the conjugate pair.
struct EigenCluster {
  std::complex<double> value;
  int multiplicity = 0;  // algebraic multiplicity of `value`
  Mat basis;             // real basis, multiplicity (real) or 2*multiplicity (pair) columns

  bool is_real() const { return value.imag() == 0.0; }
};

struct SpectralData {
  std::vector<EigenCluster> clusters;
  double tol = 0.0;
  bool ambiguous = false;  // two clusters came within 2*tol of merging

  // All eigenvalues with multiplicity, conjugates included.
  std::vector<std::complex<double>> eigenvalues() const {
    std::vector<std::complex<double>> out;
    for (const auto& c : clusters)
      for (int i = 0; i < c.multiplicity; ++i) {
        out.push_back(c.value);
        if (!c.is_real()) out.push_back(std::conj(c.value));
      }
    return out;
  }
};

struct JordanDecomposition {
  Mat H;  // hyperbolic part
  Mat E;  // elliptic part
  Mat N;  // nilpotent part
  SpectralData spectrum;
  bool warning = false;  // ambiguous clustering or tolerance had to be raised
};

enum class FlowType { hyperbolic, elliptic, nilpotent, mixed };

inline std::string to_string(FlowType t) {
  switch (t) {
    case FlowType::hyperbolic: return "hyperbolic";
    case FlowType::elliptic: return "elliptic";
    case FlowType::nilpotent: return "nilpotent";
    case FlowType::mixed: return "mixed";
  }
  return "unknown";
}

inline double spectral_radius(const Mat& d) {
  if (d.size() == 0) return 0.0;
  Eigen::EigenSolver<Mat> es(d, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double default_cluster_tol(const Mat& d) { return std::max(1e-7 * std::max(spectral_radius(d), inf_norm(d)), 1e-10); }

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

inline Mat matrix_power(const Mat& m, int p) {
  Mat r = Mat::Identity(m.rows(), m.cols());
  for (int i = 0; i < p; ++i) r = r * m;
  return r;
}

// Semisimple part of a block whose spectrum clusters at +-i*b (b > 0), by
// Newton's iteration S <- S - p(S) p'(S)^{-1} for p(x) = x^2 + b^2.
inline Mat rotation_part(const Mat& m, double b) {
  const auto n = m.rows();
  const Mat id = Mat::Identity(n, n);
  Mat s = m;
  for (int it = 0; it < 60; ++it) {
    const Mat p = s * s + b * b * id;
    const Mat step = (2.0 * s).partialPivLu().solve(p);
    s -= step;
    if (inf_norm(step) <= 1e-15 * (1.0 + inf_norm(s))) return s;
  }
  throw NumericalError("semisimple-part iteration did not converge");
}

}  // namespace detail

// Real generalized eigenspaces with eigenvalues merged by single linkage at
// distance < tol.  tol <= 0 selects default_cluster_tol(d).
inline SpectralData generalized_eigenspaces(const Mat& d, double tol = -1.0) {
  detail::require(d.rows() == d.cols(), "matrix must be square");
  detail::require(d.allFinite(), "matrix has non-finite entries");
  const int n = static_cast<int>(d.rows());
  SpectralData out;
  out.tol = tol > 0 ? tol : default_cluster_tol(d);
  if (n == 0) return out;

  Eigen::EigenSolver<Mat> es(d, false);
  const CVec ev = es.eigenvalues();
  detail::DisjointSets sets(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) < out.tol) sets.unite(i, j);

  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });

  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      for (int i : groups[a])
        for (int j : groups[b])
          if (std::abs(ev(i) - ev(j)) < 2.0 * out.tol) out.ambiguous = true;

  struct Pending {
    std::complex<double> mean;
    int size;
  };
  std::vector<Pending> upper, lower, real;
  for (const auto& g : groups) {
    std::complex<double> mean = 0.0;
    for (int i : g) mean += ev(i);
    mean /= static_cast<double>(g.size());
    const int sz = static_cast<int>(g.size());
    if (std::abs(mean.imag()) <= out.tol)
      real.push_back({{mean.real(), 0.0}, sz});
    else if (mean.imag() > 0)
      upper.push_back({mean, sz});
    else
      lower.push_back({mean, sz});
  }
  if (upper.size() != lower.size()) throw NumericalError("complex eigenvalue clusters are not conjugate-paired");
  for (const auto& u : upper) {
    const bool paired = std::any_of(lower.begin(), lower.end(), [&](const Pending& l) {
      return l.size == u.size && std::abs(l.mean - std::conj(u.mean)) < 2.0 * out.tol;
    });
    if (!paired) throw NumericalError("complex eigenvalue cluster has no conjugate partner");
  }

  const Mat id = Mat::Identity(n, n);
  for (const auto& r : real) {
    EigenCluster c;
    c.value = r.mean;
    c.multiplicity = r.size;
    c.basis = smallest_right_singular_vectors(detail::matrix_power(d - r.mean.real() * id, r.size), r.size);
    out.clusters.push_back(std::move(c));
  }
  for (const auto& u : upper) {
    EigenCluster c;
    c.value = u.mean;
    c.multiplicity = u.size;
    const Mat q = d * d - 2.0 * u.mean.real() * d + std::norm(u.mean) * id;
    c.basis = smallest_right_singular_vectors(detail::matrix_power(q, u.size), 2 * u.size);
    out.clusters.push_back(std::move(c));
  }
  std::sort(out.clusters.begin(), out.clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

namespace detail {

inline JordanDecomposition assemble_jordan(const Mat& d, SpectralData spec) {
  const auto n = d.rows();
  Mat v(n, n);
  Eigen::Index col = 0;
  for (const auto& c : spec.clusters) {
    v.middleCols(col, c.basis.cols()) = c.basis;
    col += c.basis.cols();
  }
  if (col != n) throw NumericalError("generalized eigenspaces do not span the space");
  Eigen::JacobiSVD<Mat> svd(v);
  if (svd.singularValues()(n - 1) < 1e-10 * svd.singularValues()(0))
    throw NumericalError("generalized eigenspaces are not independent");
  const Mat w = v.inverse();

  JordanDecomposition jd;
  jd.H = Mat::Zero(n, n);
  jd.E = Mat::Zero(n, n);
  col = 0;
  for (const auto& c : spec.clusters) {
    const auto k = c.basis.cols();
    const Mat vc = v.middleCols(col, k);
    const Mat wc = w.middleRows(col, k);
    jd.H += c.value.real() * (vc * wc);
    if (!c.is_real()) {
      const Mat block = wc * d * vc - c.value.real() * Mat::Identity(k, k);
      jd.E += vc * rotation_part(block, c.value.imag()) * wc;
    }
    col += k;
  }
  jd.N = d - jd.H - jd.E;
  jd.warning = spec.ambiguous;
  jd.spectrum = std::move(spec);
  return jd;
}

inline double commute_tol(const Mat& d) {
  const double s = std::max(1.0, inf_norm(d));
  return 1e-8 * s * s;
}

// Returns an empty string when H, E, N pairwise commute, else the offending pair.
inline std::string commuting_failure(const JordanDecomposition& jd, double tol) {
  if (inf_norm(Mat(commutator(jd.H, jd.E))) > tol) return "parts H,E do not commute";
  if (inf_norm(Mat(commutator(jd.H, jd.N))) > tol) return "parts H,N do not commute";
  if (inf_norm(Mat(commutator(jd.E, jd.N))) > tol) return "parts E,N do not commute";
  return {};
}

// ||N^n|| against the same scale as the commutators.
inline bool nilpotent_enough(const Mat& nil, double scale) {
  const auto n = nil.rows();
  const Mat p = matrix_power(nil, static_cast<int>(n));
  return inf_norm(p) <= 1e-8 * std::pow(scale, static_cast<double>(n));
}

}  // namespace detail

// Additive Jordan decomposition.  The clustering tolerance starts at
// default_cluster_tol and is raised by decades (up to 1e-3 * max(1, ||D||, rho))
// while the assembled parts fail to commute or N is not nilpotent; defective
// eigenvalues scatter like eps^(1/k) and need the wider radius.
inline JordanDecomposition jordan_additive(const Mat& d) {
  detail::require(d.rows() == d.cols(), "matrix must be square");
  detail::require(d.allFinite(), "matrix has non-finite entries");
  const auto n = d.rows();
  if (n == 0) return {};
  const double rho = spectral_radius(d);
  const double tol0 = default_cluster_tol(d);
  const double scale = std::max(1.0, inf_norm(d));
  const double tol_max = 1e-3 * std::max(scale, rho);
  const double ctol = detail::commute_tol(d);

  std::string last_failure = "spectral clustering";
  for (double tol = tol0; tol <= tol_max * 1.0000001; tol *= 10.0) {
    try {
      JordanDecomposition jd = detail::assemble_jordan(d, generalized_eigenspaces(d, tol));
      std::string bad = detail::commuting_failure(jd, ctol);
      if (bad.empty() && !detail::nilpotent_enough(jd.N, scale)) bad = "N is not nilpotent";
      if (bad.empty()) {
        if (tol != tol0) jd.warning = true;
        return jd;
      }
      last_failure = bad;
    } catch (const NumericalError& e) {
      last_failure = e.what();
    }
  }
  throw NumericalError("Jordan decomposition is numerically degenerate: " + last_failure);
}

inline double classify_tol(const Mat& d) { return 1e-8 * std::max(1.0, inf_norm(d)); }

// The zero map satisfies all three definitions and is reported as nilpotent.
inline FlowType classify(const JordanDecomposition& jd, double tol) {
  const bool h0 = inf_norm(jd.H) < tol;
  const bool e0 = inf_norm(jd.E) < tol;
  const bool n0 = inf_norm(jd.N) < tol;
  if (h0 && e0) return FlowType::nilpotent;
  if (e0 && n0) return FlowType::hyperbolic;
  if (h0 && n0) return FlowType::elliptic;
  return FlowType::mixed;
}

inline FlowType classify(const Mat& d) { return classify(jordan_additive(d), classify_tol(d)); }

// Semisimple with imaginary spectrum, counting the zero map.
inline bool is_elliptic_or_zero(const Mat& d) {
  const auto jd = jordan_additive(d);
  const double tol = classify_tol(d);
  return inf_norm(jd.H) < tol && inf_norm(jd.N) < tol;
}

}  // namespace lieflow
