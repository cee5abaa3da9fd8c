#include "gspin/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Ascending eigenvalues with their eigenvectors; classifies the zero block.
KernelResult classify(const Vector& values, const Matrix& vectors, double lambda_max, Eigen::Index n,
                      const KernelOptions& options, std::string method) {
  KernelResult out;
  out.method = std::move(method);
  out.largest_eigenvalue = lambda_max;
  out.threshold = options.relative_threshold * lambda_max;

  Eigen::Index zero = 0;
  while (zero < values.size() && values[zero] <= out.threshold) ++zero;
  out.basis = vectors.leftCols(zero);
  out.last_zero_eigenvalue = zero > 0 ? std::max(values[zero - 1], 0.0) : 0.0;
  out.first_nonzero_eigenvalue = zero < values.size() ? values[zero] : kInf;

  // Exact zeros are reported at the roundoff floor of the eigensolver.
  const double floor = static_cast<double>(n) * kEps * lambda_max;
  const double below = std::max(out.last_zero_eigenvalue, floor);
  out.gap_ratio = below > 0.0 ? out.first_nonzero_eigenvalue / below : kInf;
  if (out.gap_ratio < options.min_gap_ratio) {
    std::ostringstream msg;
    msg << "psd_kernel: no spectral gap at threshold " << out.threshold << " (last zero "
        << out.last_zero_eigenvalue << ", first nonzero " << out.first_nonzero_eigenvalue
        << ", ratio " << out.gap_ratio << ")";
    throw IndeterminateResult(msg.str());
  }
  return out;
}

KernelResult dense_kernel(const SparseMatrix& m, const KernelOptions& options) {
  const Matrix dense = Matrix(m);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(dense);
  if (eig.info() != Eigen::Success) throw IndeterminateResult("psd_kernel: eigensolver failed");
  const Vector& values = eig.eigenvalues();
  const double lambda_max = std::max(values[values.size() - 1], 0.0);
  if (lambda_max == 0.0) {
    KernelResult out;
    out.basis = Matrix::Identity(m.rows(), m.cols());
    out.first_nonzero_eigenvalue = kInf;
    out.gap_ratio = kInf;
    out.method = "dense";
    return out;
  }
  return classify(values, eig.eigenvectors(), lambda_max, m.rows(), options, "dense");
}

Matrix orthonormalize(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

// Scaled Chebyshev filter that damps [lo, hi] and amplifies eigenvalues near 0.
Matrix chebyshev_filter(const SparseMatrix& m, const Matrix& x, int degree, double lo, double hi) {
  const double e = 0.5 * (hi - lo);
  const double c = 0.5 * (hi + lo);
  double sigma = e / (0.0 - c);
  const double tau = 2.0 / sigma;
  Matrix prev = x;
  Matrix cur = (m * x - c * x) * (sigma / e);
  for (int i = 2; i <= degree; ++i) {
    const double sigma_next = 1.0 / (tau - sigma);
    Matrix next = (m * cur - c * cur) * (2.0 * sigma_next / e) - (sigma * sigma_next) * prev;
    prev = std::move(cur);
    cur = std::move(next);
    sigma = sigma_next;
  }
  return cur;
}

KernelResult subspace_kernel(const SparseMatrix& m, const KernelOptions& options) {
  const Eigen::Index n = m.rows();
  // Gershgorin bound on λ_max; the filter only needs an upper bound.
  double upper = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) s += std::abs(it.value());
    upper = std::max(upper, s);
  }
  if (upper == 0.0) return dense_kernel(m, options);

  // λ_max itself by a short power iteration fixes the relative threshold.
  std::mt19937_64 rng(0x5eed);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = unit_interval(rng()) - 0.5;
  double lambda_max = 0.0;
  for (int it = 0; it < 300; ++it) {
    v.normalize();
    Vector w = m * v;
    const double est = v.dot(w);
    v = std::move(w);
    if (std::abs(est - lambda_max) <= 1e-12 * est) {
      lambda_max = est;
      break;
    }
    lambda_max = est;
  }
  const double threshold = options.relative_threshold * lambda_max;

  Eigen::Index block = std::min<Eigen::Index>(n, 16);
  while (true) {
    if (4 * block >= n) return dense_kernel(m, options);
    Matrix x(n, block);
    for (Eigen::Index j = 0; j < block; ++j)
      for (Eigen::Index i = 0; i < n; ++i) x(i, j) = unit_interval(rng()) - 0.5;
    x = orthonormalize(x);

    Vector ritz;
    Matrix ritz_vectors;
    bool converged = false;
    for (int iter = 0; iter < 400 && !converged; ++iter) {
      const Matrix mx = m * x;
      Eigen::SelfAdjointEigenSolver<Matrix> small(x.transpose() * mx);
      ritz = small.eigenvalues();
      ritz_vectors = x * small.eigenvectors();
      const Matrix residual = mx * small.eigenvectors() - ritz_vectors * ritz.asDiagonal();

      // Kernel vectors must be accurate; the first nonzero Ritz value only
      // needs a residual small enough to place a true eigenvalue near it.
      Eigen::Index wanted = 0;
      while (wanted < block && ritz[wanted] <= threshold) ++wanted;
      converged = true;
      for (Eigen::Index j = 0; j < wanted; ++j)
        if (residual.col(j).norm() > 1e-11 * lambda_max) converged = false;
      if (wanted < block && residual.col(wanted).norm() > 1e-3 * ritz[wanted]) converged = false;
      if (converged) break;

      const double lo = std::max(ritz[block - 1], 1e-3 * lambda_max);
      x = orthonormalize(chebyshev_filter(m, ritz_vectors, 12, lo, upper));
    }
    if (!converged) throw IndeterminateResult("psd_kernel: subspace iteration did not converge");
    if (ritz[block - 1] <= threshold) {
      block *= 2;  // kernel at least as large as the block
      continue;
    }
    // Only the bottom of the block is trusted; drop the unconverged tail.
    return classify(ritz, ritz_vectors, lambda_max, n, options, "subspace-iteration");
  }
}

}  // namespace

KernelResult psd_kernel(const SparseMatrix& m, const KernelOptions& options) {
  if (m.rows() != m.cols()) throw InvalidArgument("psd_kernel: matrix must be square");
  if (m.rows() == 0) throw InvalidArgument("psd_kernel: empty matrix");
  switch (options.method) {
    case KernelMethod::Dense:
      return dense_kernel(m, options);
    case KernelMethod::SubspaceIteration:
      return subspace_kernel(m, options);
    case KernelMethod::Automatic:
      break;
  }
  return m.rows() <= kDenseKernelLimit ? dense_kernel(m, options) : subspace_kernel(m, options);
}

}  // namespace gspin
