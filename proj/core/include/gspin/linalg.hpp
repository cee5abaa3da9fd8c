#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gspin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Orthonormal basis (as columns) of ker(A). Singular values at or below
// rel_tol * sigma_max count as zero; an all-zero A has the full space as kernel.
Matrix null_space(const Matrix& A, double rel_tol = 1e-10);

// Orthonormal basis of the column span of A, same threshold convention.
Matrix column_span(const Matrix& A, double rel_tol = 1e-10);

int numerical_rank(const Matrix& A, double rel_tol = 1e-10);

inline Matrix commutator(const Matrix& A, const Matrix& B) { return A * B - B * A; }

// Row-major flattening: entry (i, j) goes to i * cols + j.
Vector flatten_row_major(const Matrix& m);
Matrix unflatten_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// Sign of the permutation given as a list of distinct values 0..n-1, or 0 if
// the list contains a repeat.
int permutation_sign(std::span<const int> perm);

// Deterministic uniform double in [0, 1) from the top 53 bits of a 64-bit draw,
// so seeded sequences agree across standard library implementations.
inline double unit_interval(unsigned long long bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace gspin
