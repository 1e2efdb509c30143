// Additive Jordan decomposition D = H + E + N of a few small matrices.
#include <lieflow/lieflow.hpp>

#include <iostream>

int main() {
  using namespace lieflow;
  const Eigen::IOFormat fmt(4, 0, " ", "\n", "  [", "]");
  Mat shear_rotation(4, 4);
  shear_rotation << 1, 1, 0, 0,
                    0, 1, 0, 0,
                    0, 0, 0, -2,
                    0, 0, 2, 0;
  Mat block(3, 3);
  block << 0, 1, 0,
           0, 0, 1,
           0, 0, 0;
  for (const Mat& d : {shear_rotation, block, algebras::sl2().ad(Vec::Unit(3, 0))}) {
    const JordanDecomposition jd = jordan_additive(d);
    std::cout << "D =\n" << d.format(fmt) << "\ntype: " << to_string(classify(jd, classify_tol(d))) << '\n';
    std::cout << "H =\n" << jd.H.format(fmt) << "\nE =\n" << jd.E.format(fmt) << "\nN =\n" << jd.N.format(fmt) << "\n\n";
  }
}
