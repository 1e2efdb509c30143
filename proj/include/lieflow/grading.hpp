#pragma once

// Eigenspace layers g_lambda of the hyperbolic part and the unstable / central
// / stable subalgebras g+, g0, g-.

#include <lieflow/algebra.hpp>
#include <lieflow/jordan.hpp>

#include <string>
#include <vector>

namespace lieflow {

struct EigenLayer {
  double lambda = 0.0;
  Mat basis;  // orthonormal columns spanning {X : H X = lambda X}
};

struct TriDecomposition {
  Mat plus;   // g+
  Mat zero;   // g0 = ker H
  Mat minus;  // g-
  std::vector<EigenLayer> layers;
  double zero_tol = 0.0;
  bool ambiguous = false;  // some |lambda| within 2x the zero threshold
};

// Zero-eigenvalue threshold 1e-8 * (1 + spectral radius of H).
inline double zero_eigenvalue_tol(const Mat& h) { return 1e-8 * (1.0 + spectral_radius(h)); }

inline std::vector<EigenLayer> layer_decomposition(const LieAlgebra& alg, const JordanDecomposition& jd) {
  const int n = alg.dim();
  detail::require(jd.H.rows() == n && jd.H.cols() == n, "Jordan decomposition does not match the algebra");
  Eigen::EigenSolver<Mat> es(jd.H, false);
  const CVec ev = es.eigenvalues();
  const double tol = std::max(1e-9 * (1.0 + spectral_radius(jd.H)), 1e-12);
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev(i).imag()) > 1e-6 * (1.0 + std::abs(ev(i))))
      throw NumericalError("hyperbolic part has non-real spectrum");
    values.push_back(ev(i).real());
  }
  std::sort(values.begin(), values.end());

  std::vector<EigenLayer> layers;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < values.size() && values[j] - values[i] < tol) sum += values[j++];
    const auto mult = static_cast<Eigen::Index>(j - i);
    EigenLayer layer;
    layer.lambda = sum / static_cast<double>(mult);
    if (std::abs(layer.lambda) < tol) layer.lambda = 0.0;
    layer.basis = smallest_right_singular_vectors(Mat(jd.H - layer.lambda * Mat::Identity(n, n)), mult);
    const double resid = inf_norm(Mat(jd.H * layer.basis - layer.lambda * layer.basis));
    if (resid > 1e-6 * (1.0 + std::abs(layer.lambda)))
      throw NumericalError("hyperbolic part is not semisimple (eigenvector residual " + std::to_string(resid) + ")");
    layers.push_back(std::move(layer));
    i = j;
  }
  return layers;
}

inline TriDecomposition tri_decomposition(const LieAlgebra& alg, const std::vector<EigenLayer>& layers) {
  const int n = alg.dim();
  double radius = 0.0;
  for (const auto& l : layers) radius = std::max(radius, std::abs(l.lambda));
  TriDecomposition tri;
  tri.zero_tol = 1e-8 * (1.0 + radius);
  Mat plus(n, 0), zero(n, 0), minus(n, 0);
  for (const auto& l : layers) {
    const double a = std::abs(l.lambda);
    if (a > tri.zero_tol && a < 2.0 * tri.zero_tol) tri.ambiguous = true;
    if (a < tri.zero_tol)
      zero = span_union(zero, l.basis);
    else if (l.lambda > 0)
      plus = span_union(plus, l.basis);
    else
      minus = span_union(minus, l.basis);
  }
  tri.plus = std::move(plus);
  tri.zero = std::move(zero);
  tri.minus = std::move(minus);
  tri.layers = layers;
  return tri;
}

inline TriDecomposition tri_decomposition(const LieAlgebra& alg, const JordanDecomposition& jd) {
  return tri_decomposition(alg, layer_decomposition(alg, jd));
}

// max norm of the component of [u, v] (u in g_lambda, v in g_mu) lying
// outside g_{lambda+mu}, measured in the layer-adapted basis.
inline double bracket_grading_defect(const LieAlgebra& alg, const std::vector<EigenLayer>& layers) {
  const int n = alg.dim();
  Mat v(n, n);
  std::vector<Eigen::Index> offset;
  Eigen::Index col = 0;
  for (const auto& l : layers) {
    offset.push_back(col);
    detail::require(col + l.basis.cols() <= n, "layers overfill the algebra");
    v.middleCols(col, l.basis.cols()) = l.basis;
    col += l.basis.cols();
  }
  detail::require(col == n, "layers do not span the algebra");
  const Eigen::PartialPivLU<Mat> lu(v);
  double scale = 1.0;
  for (const auto& l : layers) scale = std::max(scale, std::abs(l.lambda));
  const double match_tol = 1e-8 * scale;

  double worst = 0.0;
  for (std::size_t a = 0; a < layers.size(); ++a)
    for (std::size_t b = 0; b < layers.size(); ++b) {
      const double target = layers[a].lambda + layers[b].lambda;
      std::ptrdiff_t t = -1;
      for (std::size_t c = 0; c < layers.size(); ++c)
        if (std::abs(layers[c].lambda - target) < match_tol) t = static_cast<std::ptrdiff_t>(c);
      for (Eigen::Index i = 0; i < layers[a].basis.cols(); ++i)
        for (Eigen::Index j = 0; j < layers[b].basis.cols(); ++j) {
          const Vec br = alg.bracket(layers[a].basis.col(i), layers[b].basis.col(j));
          Vec coeff = lu.solve(br);
          if (t >= 0) coeff.segment(offset[t], layers[t].basis.cols()).setZero();
          worst = std::max(worst, Vec(v * coeff).norm());
        }
    }
  return worst;
}

// max over D, H, E, N and over g+, g0, g- of the residual of M(subspace) outside the subspace.
inline double invariance_defect(const Mat& d, const JordanDecomposition& jd, const TriDecomposition& tri) {
  double worst = 0.0;
  for (const Mat* m : {&d, &jd.H, &jd.E, &jd.N})
    for (const Mat* s : {&tri.plus, &tri.zero, &tri.minus})
      for (Eigen::Index i = 0; i < s->cols(); ++i)
        worst = std::max(worst, residual_outside(*s, Vec(*m * s->col(i))));
  return worst;
}

enum class AlgebraClass { solvable, semisimple_compact, semisimple_noncompact, general };

inline std::string to_string(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::solvable: return "solvable";
    case AlgebraClass::semisimple_compact: return "semisimple-compact";
    case AlgebraClass::semisimple_noncompact: return "semisimple-noncompact";
    case AlgebraClass::general: return "general";
  }
  return "general";
}

inline AlgebraClass parse_algebra_class(const std::string& s) {
  if (s == "solvable") return AlgebraClass::solvable;
  if (s == "semisimple-compact") return AlgebraClass::semisimple_compact;
  if (s == "semisimple-noncompact") return AlgebraClass::semisimple_noncompact;
  if (s == "general") return AlgebraClass::general;
  throw InputError("unknown class hint '" + s + "'");
}

enum class Decomposability { decomposable, not_decomposable, unknown };

inline std::string to_string(Decomposability d) {
  switch (d) {
    case Decomposability::decomposable: return "decomposable";
    case Decomposability::not_decomposable: return "not decomposable";
    case Decomposability::unknown: return "unknown";
  }
  return "unknown";
}

struct DecomposabilityReport {
  Decomposability verdict = Decomposability::unknown;
  bool solvable = false;
  bool killing_nondegenerate = false;
  bool killing_negative_definite = false;
  int dim_plus = 0, dim_zero = 0, dim_minus = 0;
  std::string reason;
};

// Applies the rules: solvable groups are decomposable by any flow; a semisimple
// group is decomposable iff g0 = g; otherwise decomposable when g0 = g and
// unknown else.  Throws InputError when the hint contradicts the diagnostics.
inline DecomposabilityReport algebra_decomposability_report(const LieAlgebra& alg, const TriDecomposition& tri,
                                                            AlgebraClass hint) {
  DecomposabilityReport r;
  r.solvable = alg.is_solvable();
  const Mat k = alg.killing_form();
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const Vec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  r.killing_nondegenerate = ev.cwiseAbs().minCoeff() > 1e-9 * scale;
  r.killing_negative_definite = ev.maxCoeff() < -1e-9 * scale;
  r.dim_plus = static_cast<int>(tri.plus.cols());
  r.dim_zero = static_cast<int>(tri.zero.cols());
  r.dim_minus = static_cast<int>(tri.minus.cols());
  const bool central_is_all = r.dim_zero == alg.dim();

  switch (hint) {
    case AlgebraClass::solvable:
      if (!r.solvable) throw InputError("class hint 'solvable' but the derived series does not vanish");
      r.verdict = Decomposability::decomposable;
      r.reason = "solvable groups are decomposable by every flow of automorphisms";
      break;
    case AlgebraClass::semisimple_compact:
    case AlgebraClass::semisimple_noncompact:
      if (!r.killing_nondegenerate)
        throw InputError("class hint '" + to_string(hint) + "' but the Killing form is degenerate");
      if (hint == AlgebraClass::semisimple_compact && !r.killing_negative_definite)
        throw InputError("class hint 'semisimple-compact' but the Killing form is not negative definite");
      if (hint == AlgebraClass::semisimple_noncompact && r.killing_negative_definite)
        throw InputError("class hint 'semisimple-noncompact' but the Killing form is negative definite");
      r.verdict = central_is_all ? Decomposability::decomposable : Decomposability::not_decomposable;
      r.reason = "semisimple groups are decomposable iff the central subalgebra is everything";
      break;
    case AlgebraClass::general:
      r.verdict = central_is_all ? Decomposability::decomposable : Decomposability::unknown;
      r.reason = central_is_all ? "central subalgebra is everything" : "no applicable sufficient condition";
      break;
  }
  return r;
}

}  // namespace lieflow
