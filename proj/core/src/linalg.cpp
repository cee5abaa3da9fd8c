#include "gspin/linalg.hpp"

#include <algorithm>
#include <vector>

namespace gspin {

namespace {

struct Svd {
  Vector singular;
  Matrix u;
  Matrix v;
};

Svd full_svd(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

Eigen::Index count_above(const Vector& s, double rel_tol) {
  if (s.size() == 0) return 0;
  const double cut = rel_tol * s.maxCoeff();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

}  // namespace

Matrix null_space(const Matrix& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || a.norm() == 0.0) return Matrix::Identity(n, n);
  const Svd svd = full_svd(a);
  const Eigen::Index r = count_above(svd.singular, rel_tol);
  return svd.v.rightCols(n - r);
}

Matrix column_span(const Matrix& a, double rel_tol) {
  if (a.cols() == 0 || a.norm() == 0.0) return Matrix(a.rows(), 0);
  const Svd svd = full_svd(a);
  const Eigen::Index r = count_above(svd.singular, rel_tol);
  return svd.u.leftCols(r);
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0 || a.norm() == 0.0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  return static_cast<int>(count_above(svd.singularValues(), rel_tol));
}

Vector flatten_row_major(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

Matrix unflatten_row_major(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
  return m;
}

int permutation_sign(std::span<const int> perm) {
  std::vector<int> p(perm.begin(), perm.end());
  const int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v]) return 0;
    seen[v] = true;
  }
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    while (p[i] != i) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace gspin
