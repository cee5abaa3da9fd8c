#pragma once

// Independent reference computations for the tests. These deliberately avoid
// the library's sparse Gram-operator path: the Lie action is assembled from
// explicit Kronecker products and its kernel found by a dense SVD.

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline MatrixXd identity_power(int d, int copies) {
  MatrixXd out = MatrixXd::Identity(1, 1);
  for (int i = 0; i < copies; ++i) out = Eigen::kroneckerProduct(out, MatrixXd::Identity(d, d)).eval();
  return out;
}

// L_X = Σ_s I^{⊗s} ⊗ X ⊗ I^{⊗(k-s-1)}, with slot 0 most significant.
inline MatrixXd lie_action(const MatrixXd& x, int order) {
  const int d = static_cast<int>(x.rows());
  MatrixXd total = MatrixXd::Zero(static_cast<Eigen::Index>(std::pow(d, order)),
                                  static_cast<Eigen::Index>(std::pow(d, order)));
  for (int s = 0; s < order; ++s) {
    const MatrixXd left = identity_power(d, s);
    const MatrixXd right = identity_power(d, order - s - 1);
    total += Eigen::kroneckerProduct(Eigen::kroneckerProduct(left, x).eval(), right).eval();
  }
  return total;
}

inline int svd_kernel_dim(const MatrixXd& a, double rel_tol = 1e-9) {
  Eigen::BDCSVD<MatrixXd> svd(a);
  const VectorXd& sv = svd.singularValues();
  const double cut = rel_tol * (sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) ++rank;
  return static_cast<int>(a.cols()) - rank;
}

// Kernel dimension of the stacked actions of all generators.
inline int invariant_dim(const std::vector<MatrixXd>& gens, int order) {
  const Eigen::Index n = static_cast<Eigen::Index>(std::pow(gens.front().rows(), order));
  MatrixXd stacked(n * static_cast<Eigen::Index>(gens.size()), n);
  for (std::size_t a = 0; a < gens.size(); ++a) stacked.middleRows(a * n, n) = lie_action(gens[a], order);
  return svd_kernel_dim(stacked);
}

inline double levi_civita3(int i, int j, int k) { return (i - j) * (j - k) * (k - i) / 2.0; }

// Uniform doubles from a tiny LCG, independent of the library's RNG path.
struct Lcg {
  unsigned long long state;
  double next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
  VectorXd unit(int d) {
    VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = 2.0 * next() - 1.0;
    return v / v.norm();
  }
};

}  // namespace oracle
