#include "gspin/group_reps.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

// One term of an upper-triangle entry H[row, col] += sign * x_param. Indices
// are 1-based as printed; the lower triangle follows from antisymmetry.
struct Term {
  int row;
  int col;
  int sign;
  int param;
};

// H(x) for G2 on R^7.
constexpr std::array<Term, 28> kG2Table{{
    {1, 2, +1, 1},  {1, 3, -1, 2},  {1, 4, +1, 3},  {1, 5, -1, 4},  {1, 6, -1, 5},
    {1, 7, +1, 9},  {1, 7, -1, 7},  {2, 3, +1, 6},  {2, 4, +1, 7},  {2, 5, +1, 8},
    {2, 5, -1, 5},  {2, 6, +1, 4},  {2, 6, -1, 11}, {2, 7, +1, 3},  {2, 7, +1, 10},
    {3, 4, -1, 8},  {3, 5, +1, 9},  {3, 6, +1, 10}, {3, 7, +1, 11}, {4, 5, +1, 13},
    {4, 5, -1, 6},  {4, 6, +1, 14}, {4, 6, -1, 2},  {4, 7, +1, 12}, {4, 7, -1, 1},
    {5, 6, +1, 12}, {5, 7, -1, 14}, {6, 7, +1, 13},
}};

// H(x) for SU(3) realified on R^6.
constexpr std::array<Term, 16> kSu3Table{{
    {1, 2, -1, 4}, {1, 3, -1, 5}, {1, 4, +1, 7}, {1, 5, +1, 1}, {1, 6, +1, 2}, {2, 3, -1, 6},
    {2, 4, +1, 1}, {2, 5, +1, 8}, {2, 5, -1, 7}, {2, 6, +1, 3}, {3, 4, +1, 2}, {3, 5, +1, 3},
    {3, 6, -1, 8}, {4, 5, -1, 4}, {4, 6, -1, 5}, {5, 6, -1, 6},
}};

template <std::size_t N>
Matrix from_table(const std::array<Term, N>& table, int d, std::span<const double> x) {
  Matrix h = Matrix::Zero(d, d);
  for (const Term& t : table) {
    const double v = t.sign * x[t.param - 1];
    h(t.row - 1, t.col - 1) += v;
    h(t.col - 1, t.row - 1) -= v;
  }
  return h;
}

LieAlgebraBasis basis_from_generator(int d, int params, std::string name,
                                     Matrix (*gen)(std::span<const double>)) {
  LieAlgebraBasis basis{d, std::move(name), {}};
  std::vector<double> e(params, 0.0);
  for (int i = 0; i < params; ++i) {
    e.assign(params, 0.0);
    e[i] = 1.0;
    basis.generators.push_back(gen(e));
  }
  return basis;
}

void require_dim(int d, int lo, const char* what) {
  if (d < lo) throw InvalidArgument(std::string(what) + ": dimension " + std::to_string(d) +
                                    " below minimum " + std::to_string(lo));
}

std::string su_name(int k) { return "su-real(" + std::to_string(k) + ")"; }

}  // namespace

Matrix stacked_generators(const LieAlgebraBasis& basis) {
  Matrix a(basis.d * basis.d, basis.size());
  for (int c = 0; c < basis.size(); ++c) a.col(c) = flatten_row_major(basis.generators[c]);
  return a;
}

BasisDiagnostics diagnose(const LieAlgebraBasis& basis) {
  BasisDiagnostics out;
  for (const Matrix& x : basis.generators)
    out.max_antisymmetry = std::max(out.max_antisymmetry, (x + x.transpose()).cwiseAbs().maxCoeff());
  const Matrix a = stacked_generators(basis);
  out.rank = numerical_rank(a);
  const Matrix q = column_span(a);
  for (int i = 0; i < basis.size(); ++i) {
    for (int j = i + 1; j < basis.size(); ++j) {
      const Vector c = flatten_row_major(commutator(basis.generators[i], basis.generators[j]));
      const double norm = c.norm();
      if (norm == 0.0) continue;
      const Vector r = c - q * (q.transpose() * c);
      out.closure_residual = std::max(out.closure_residual, r.norm() / norm);
    }
  }
  return out;
}

LieAlgebraBasis so_algebra_basis(int d) {
  require_dim(d, 2, "so_algebra_basis");
  LieAlgebraBasis basis{d, "so(" + std::to_string(d) + ")", {}};
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Matrix x = Matrix::Zero(d, d);
      x(i, j) = 1.0;
      x(j, i) = -1.0;
      basis.generators.push_back(std::move(x));
    }
  }
  return basis;
}

Matrix g2_generator(std::span<const double> x) {
  if (x.size() != 14) throw InvalidArgument("g2_generator: expected 14 parameters");
  return from_table(kG2Table, 7, x);
}

LieAlgebraBasis g2_algebra_basis() { return basis_from_generator(7, 14, "g2", &g2_generator); }

Matrix su_real_embedding(const CMatrix& u) {
  const Eigen::Index k = u.rows();
  if (u.cols() != k) throw InvalidArgument("su_real_embedding: matrix must be square");
  Matrix d(2 * k, 2 * k);
  d.topLeftCorner(k, k) = u.real();
  d.topRightCorner(k, k) = -u.imag();
  d.bottomLeftCorner(k, k) = u.imag();
  d.bottomRightCorner(k, k) = u.real();
  return d;
}

Matrix symplectic_form(int k) {
  if (k < 1) throw InvalidArgument("symplectic_form: k must be at least 1");
  Matrix j = Matrix::Zero(2 * k, 2 * k);
  j.topRightCorner(k, k).setIdentity();
  j.bottomLeftCorner(k, k) = -Matrix::Identity(k, k);
  return j;
}

Matrix su3_generator(std::span<const double> x) {
  if (x.size() != 8) throw InvalidArgument("su3_generator: expected 8 parameters");
  return from_table(kSu3Table, 6, x);
}

LieAlgebraBasis su3_real_algebra_basis() {
  return basis_from_generator(6, 8, su_name(3), &su3_generator);
}

LieAlgebraBasis su_real_algebra_basis(int k) {
  if (k < 2) throw InvalidArgument("su_real_algebra_basis: k must be at least 2");
  if (k == 3) return su3_real_algebra_basis();
  LieAlgebraBasis basis{2 * k, su_name(k), {}};
  const Complex i1(0.0, 1.0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      CMatrix x = CMatrix::Zero(k, k);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      basis.generators.push_back(su_real_embedding(x));
      CMatrix y = CMatrix::Zero(k, k);
      y(a, b) = i1;
      y(b, a) = i1;
      basis.generators.push_back(su_real_embedding(y));
    }
  }
  for (int a = 0; a + 1 < k; ++a) {
    CMatrix h = CMatrix::Zero(k, k);
    h(a, a) = i1;
    h(a + 1, a + 1) = -i1;
    basis.generators.push_back(su_real_embedding(h));
  }
  return basis;
}

GroupSpec special_orthogonal_group(int d) {
  require_dim(d, 2, "special_orthogonal_group");
  GroupSpec g;
  g.d = d;
  g.family = GroupFamily::SpecialOrthogonal;
  g.name = "special-orthogonal";
  g.algebra = so_algebra_basis(d);
  g.contains_inversion = d % 2 == 0;  // -I has determinant (-1)^d
  return g;
}

GroupSpec g2_group() {
  GroupSpec g;
  g.d = 7;
  g.family = GroupFamily::G2;
  g.name = "g2";
  g.algebra = g2_algebra_basis();
  g.contains_inversion = false;
  g.successors = {"special-orthogonal"};
  return g;
}

GroupSpec su_real_group(int k) {
  GroupSpec g;
  g.d = 2 * k;
  g.family = GroupFamily::SuReal;
  g.name = su_name(k);
  g.algebra = su_real_algebra_basis(k);
  // Centre of SU(k) meets -1 only for even k; the 4k+2 case has odd k.
  g.contains_inversion = k % 2 == 0;
  g.successors = {"inversion-containing", "special-orthogonal"};
  return g;
}

GroupSpec inversion_containing_group(int d) {
  require_dim(d, 2, "inversion_containing_group");
  if (d % 2 != 0) throw InvalidArgument("inversion_containing_group: d must be even");
  GroupSpec g;
  g.d = d;
  g.family = GroupFamily::InversionContaining;
  g.name = "inversion-containing";
  g.contains_inversion = true;
  g.successors = {"special-orthogonal"};
  return g;
}

GroupSpec group_from_name(std::string_view name, int d) {
  if (name == "special-orthogonal" || name == "so") return special_orthogonal_group(d);
  if (name == "g2") {
    if (d != 7) throw InvalidArgument("group_from_name: g2 acts on d = 7 only");
    return g2_group();
  }
  if (name == "inversion-containing" || name == "inversion") return inversion_containing_group(d);
  if (name == "su" || name == "su-real" || name.starts_with("su-real(")) {
    if (d % 2 != 0 || d < 4) throw InvalidArgument("group_from_name: su-real needs even d >= 4");
    if (name.starts_with("su-real(") && name != su_name(d / 2))
      throw InvalidArgument("group_from_name: " + std::string(name) + " does not act on d = " +
                            std::to_string(d));
    return su_real_group(d / 2);
  }
  throw InvalidArgument("group_from_name: unknown group '" + std::string(name) + "'");
}

GroupSpec minimal_transitive_group(int d) {
  require_dim(d, 2, "minimal_transitive_group");
  if (d % 2 == 1) return d == 7 ? g2_group() : special_orthogonal_group(d);
  if (d % 4 == 2 && d > 2) return su_real_group(d / 2);
  return inversion_containing_group(d);
}

OrthogonalMatrix::OrthogonalMatrix(Matrix entries) : r_(std::move(entries)) {
  if (r_.rows() != r_.cols()) throw InvalidArgument("OrthogonalMatrix: not square");
  const Matrix defect = r_.transpose() * r_ - Matrix::Identity(r_.rows(), r_.cols());
  if (defect.cwiseAbs().maxCoeff() > kTolerance)
    throw InvalidArgument("OrthogonalMatrix: RᵀR deviates from identity");
  if (std::abs(r_.determinant() - 1.0) > kTolerance)
    throw InvalidArgument("OrthogonalMatrix: determinant is not +1");
}

OrthogonalMatrix random_group_element(const LieAlgebraBasis& basis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix x = Matrix::Zero(basis.d, basis.d);
  for (const Matrix& g : basis.generators) {
    const double c = std::numbers::pi * (2.0 * unit_interval(rng()) - 1.0);
    x += c * g;
  }
  return OrthogonalMatrix(matrix_exp(x));
}

}  // namespace gspin
