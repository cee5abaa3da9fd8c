#pragma once

// Kernel of a sparse symmetric positive semidefinite operator, with an
// explicit spectral-gap diagnostic.

#include <string>

#include <Eigen/SparseCore>

#include "gspin/linalg.hpp"

namespace gspin {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class KernelMethod {
  Automatic,        // dense up to kDenseKernelLimit, filtered subspace iteration above
  Dense,            // full symmetric eigendecomposition
  SubspaceIteration // Chebyshev-filtered subspace iteration (matrix-free)
};

inline constexpr Eigen::Index kDenseKernelLimit = 1500;

struct KernelOptions {
  double relative_threshold = 1e-10;  // zero eigenvalues: λ <= threshold * λ_max
  double min_gap_ratio = 1e6;         // required λ_first_nonzero / λ_last_zero
  KernelMethod method = KernelMethod::Automatic;
};

struct KernelResult {
  Matrix basis;                    // orthonormal columns spanning the kernel
  double threshold = 0.0;          // absolute threshold used
  double largest_eigenvalue = 0.0;
  double last_zero_eigenvalue = 0.0;      // largest eigenvalue counted as zero (0 if none)
  double first_nonzero_eigenvalue = 0.0;  // smallest eigenvalue above threshold (+inf if none)
  double gap_ratio = 0.0;
  std::string method;
};

/// Throws IndeterminateResult when the spectrum has no gap of min_gap_ratio
/// around the threshold.
KernelResult psd_kernel(const SparseMatrix& m, const KernelOptions& options = {});

}  // namespace gspin
