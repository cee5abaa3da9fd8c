#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "gspin/errors.hpp"
#include "gspin/invariant_solver.hpp"
#include "oracles.hpp"

using namespace gspin;

namespace {

constexpr std::array<SymmetryConstraint, 1> kAntisym{SymmetryConstraint::AntisymmetricFirstPair};

// Distance between span(t) and span(ref) for unit-normalized vectors.
double sign_scale_residual(const Vector& t, const Vector& ref) {
  const Vector a = t / t.norm();
  const Vector b = ref / ref.norm();
  return std::min((a - b).norm(), (a + b).norm());
}

}  // namespace

TEST(InvariantSolver, DimensionsMatchDenseOracle) {
  struct Case {
    LieAlgebraBasis basis;
    int order;
  };
  const std::vector<Case> cases{{so_algebra_basis(3), 2}, {so_algebra_basis(3), 3},
                                {so_algebra_basis(3), 4}, {so_algebra_basis(4), 3},
                                {so_algebra_basis(4), 4}, {so_algebra_basis(5), 3},
                                {su3_real_algebra_basis(), 2}, {su3_real_algebra_basis(), 3},
                                {g2_algebra_basis(), 2},  {g2_algebra_basis(), 3}};
  for (const Case& c : cases) {
    const SolutionSpace s = invariant_tensors(c.basis, c.order);
    EXPECT_EQ(s.dimension, oracle::invariant_dim(c.basis.generators, c.order))
        << c.basis.name << " order " << c.order;
  }
}

TEST(InvariantSolver, OrderTwoIsKroneckerDelta) {
  for (int d : {3, 5, 7}) {
    const SolutionSpace s = invariant_tensors(special_orthogonal_group(d), 2);
    ASSERT_EQ(s.dimension, 1);
    const Vector delta = flatten_row_major(Matrix::Identity(d, d));
    EXPECT_LT(sign_scale_residual(s.basis[0].components(), delta), 1e-9);
  }
}

TEST(InvariantSolver, So3OrderThreeIsLeviCivita) {
  const SolutionSpace s = invariant_tensors(special_orthogonal_group(3), 3);
  ASSERT_EQ(s.dimension, 1);
  Vector eps(27);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) eps[(i * 3 + j) * 3 + k] = oracle::levi_civita3(i, j, k);
  EXPECT_LT(sign_scale_residual(s.basis[0].components(), eps), 1e-9);
  EXPECT_EQ(levi_civita_tensor(3).components(), eps);
  EXPECT_GT(s.gap_ratio, 1e6);
}

TEST(InvariantSolver, OddSpecialOrthogonalHasNoCubicInvariant) {
  for (int d : {5, 7, 9}) EXPECT_EQ(invariant_tensors(special_orthogonal_group(d), 3).dimension, 0) << d;
}

TEST(InvariantSolver, G2CubicInvariantIsOctonionic) {
  const SolutionSpace s = invariant_tensors(g2_group(), 3, kAntisym);
  ASSERT_EQ(s.dimension, 1);
  const InvariantTensor& t = s.basis[0];
  const std::set<std::array<int, 3>> triples{{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6},
                                             {2, 5, 7}, {3, 4, 7}, {3, 6, 5}};
  Vector psi = Vector::Zero(343);
  for (const auto& tr : triples) {
    const int i = tr[0] - 1, j = tr[1] - 1, k = tr[2] - 1;
    // Even and odd permutations of (i, j, k).
    for (const auto& p : std::vector<std::array<int, 4>>{{i, j, k, 1}, {j, k, i, 1}, {k, i, j, 1},
                                                         {j, i, k, -1}, {i, k, j, -1}, {k, j, i, -1}})
      psi[(p[0] * 7 + p[1]) * 7 + p[2]] = p[3];
  }
  EXPECT_LT(sign_scale_residual(t.components(), psi), 1e-9);
  EXPECT_LT(sign_scale_residual(octonion_tensor().components(), psi), 1e-15);
  // Exactly 42 nonzero entries, all of equal magnitude.
  int nonzero = 0;
  for (Eigen::Index f = 0; f < 343; ++f)
    if (std::abs(t.components()[f]) > 1e-9) {
      ++nonzero;
      EXPECT_NEAR(std::abs(t.components()[f]), 1.0 / std::sqrt(42.0), 1e-9);
    }
  EXPECT_EQ(nonzero, 42);
}

TEST(InvariantSolver, Su3RealQuadraticInvariantsSpanIdentityAndJ) {
  const SolutionSpace s = invariant_tensors(su_real_group(3), 2);
  ASSERT_EQ(s.dimension, 2);
  Matrix span(36, 2);
  span.col(0) = s.basis[0].components();
  span.col(1) = s.basis[1].components();
  const Matrix proj = span * span.transpose();
  for (const Matrix& m : {Matrix(Matrix::Identity(6, 6)), symplectic_form(3)}) {
    const Vector v = flatten_row_major(m);
    EXPECT_LT((proj * v - v).norm(), 1e-9 * v.norm());
  }
}

TEST(InvariantSolver, InversionParityShortcut) {
  for (int d : {2, 4, 8}) {
    const SolutionSpace s = invariant_tensors(minimal_transitive_group(d), 3);
    EXPECT_EQ(s.dimension, 0);
    EXPECT_TRUE(s.parity_shortcut);
  }
  EXPECT_THROW(invariant_tensors(inversion_containing_group(4), 2), InvalidArgument);
  // SO(4) contains -I: parity still decides, and the oracle agrees.
  const SolutionSpace s = invariant_tensors(special_orthogonal_group(4), 3);
  EXPECT_TRUE(s.parity_shortcut);
  EXPECT_EQ(oracle::invariant_dim(so_algebra_basis(4).generators, 3), 0);
}

TEST(InvariantSolver, AntisymmetricConstraint) {
  // SO(3) order 2 has only δ, which is symmetric.
  EXPECT_EQ(invariant_tensors(special_orthogonal_group(3), 2, kAntisym).dimension, 0);
  // su-real(3) order 2: J survives, I does not.
  const SolutionSpace s = invariant_tensors(su_real_group(3), 2, kAntisym);
  ASSERT_EQ(s.dimension, 1);
  EXPECT_LT(sign_scale_residual(s.basis[0].components(), flatten_row_major(symplectic_form(3))), 1e-9);
}

TEST(InvariantSolver, SizeGuard) {
  EXPECT_THROW(invariant_tensors(special_orthogonal_group(9), 5), GuardViolation);
  EXPECT_THROW(invariance_operator(so_algebra_basis(12), 4), GuardViolation);
}

TEST(InvariantSolver, TrivialMultiplicityAtOrderTwo) {
  for (int d = 3; d <= 8; ++d) EXPECT_EQ(trivial_multiplicity(special_orthogonal_group(d), 2), 1) << d;
  EXPECT_EQ(trivial_multiplicity(g2_group(), 2), 1);
}

TEST(InvariantSolver, CommutantDimensionMatchesQuarticInvariants) {
  // For an orthogonal representation, End(V⊗V)^G ≅ (V^⊗4)^G.
  for (int d : {3, 4, 5}) {
    const int expected = oracle::invariant_dim(so_algebra_basis(d).generators, 4);
    EXPECT_EQ(commutant_dimension(special_orthogonal_group(d)), expected) << d;
  }
  EXPECT_EQ(commutant_dimension(special_orthogonal_group(3)), 3);
  EXPECT_EQ(commutant_dimension(special_orthogonal_group(4)), 4);
  EXPECT_EQ(commutant_dimension(special_orthogonal_group(5)), 3);
  EXPECT_THROW(commutant_dimension(inversion_containing_group(4)), InvalidArgument);
}

TEST(InvariantSolver, FiniteRotationsPreserveInvariants) {
  EXPECT_LT(verify_invariance(octonion_tensor(), g2_group(), 5, 11), 1e-12);
  EXPECT_LT(verify_invariance(levi_civita_tensor(4), special_orthogonal_group(4), 5, 3), 1e-12);
  // ψ is not SO(7)-invariant.
  EXPECT_GT(verify_invariance(octonion_tensor(), special_orthogonal_group(7), 3, 5), 1e-2);
}

TEST(InvariantSolver, InfinitesimalActionMatchesKroneckerOracle) {
  const LieAlgebraBasis b = g2_algebra_basis();
  oracle::Lcg rng{21};
  Vector v(343);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next() - 0.5;
  for (int a : {0, 5, 13}) {
    const Vector got = apply_infinitesimal(b.generators[a], v, 7, 3);
    EXPECT_LT((got - oracle::lie_action(b.generators[a], 3) * v).norm(), 1e-12);
  }
}

TEST(InvariantSolver, GroupActionMatchesKroneckerOracle) {
  const Matrix r = random_group_element(so_algebra_basis(3), 9).matrix();
  oracle::Lcg rng{4};
  Vector v(27);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.next() - 0.5;
  const Eigen::MatrixXd rrr =
      Eigen::kroneckerProduct(Eigen::kroneckerProduct(r, r).eval(), r).eval();
  EXPECT_LT((apply_group_element(r, v, 3, 3) - rrr * v).norm(), 1e-13);
}

TEST(InvariantSolver, CanonicalBasisIsDeterministic) {
  Matrix a(4, 2);
  a << 1, 1, 1, -1, 0, 0, 0, 0;
  const Matrix c1 = canonicalize_basis(a);
  Matrix rotated = a;
  rotated.col(0) = 0.6 * a.col(0) + 0.8 * a.col(1);
  rotated.col(1) = -0.8 * a.col(0) + 0.6 * a.col(1);
  const Matrix c2 = canonicalize_basis(-rotated);
  EXPECT_LT((c1 - c2).norm(), 1e-12);
  EXPECT_LT((c1.transpose() * c1 - Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(InvariantSolver, TensorIndexing) {
  const InvariantTensor eps = levi_civita_tensor(3);
  EXPECT_EQ(eps({0, 1, 2}), 1.0);
  EXPECT_EQ(eps({2, 1, 0}), -1.0);
  EXPECT_EQ(eps.multi_index(eps.flat_index(std::array<int, 3>{1, 2, 0})), (std::vector<int>{1, 2, 0}));
  EXPECT_THROW(eps({0, 3, 1}), InvalidArgument);
  const Matrix g = eps.contract_last(Vector::Unit(3, 2));
  EXPECT_EQ(g(0, 1), 1.0);
  EXPECT_EQ(g(1, 0), -1.0);
}
