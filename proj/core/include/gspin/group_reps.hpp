#pragma once

// Matrix Lie algebras of the minimal groups acting transitively on S^(d-1),
// group metadata used by the closure pipeline, and group elements.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gspin/linalg.hpp"

namespace gspin {

/// Real d×d generators of a matrix Lie algebra acting orthogonally on R^d.
struct LieAlgebraBasis {
  int d = 0;
  std::string name;
  std::vector<Matrix> generators;

  int size() const { return static_cast<int>(generators.size()); }
};

struct BasisDiagnostics {
  double max_antisymmetry = 0.0;  // max_a ‖X_a + X_aᵀ‖_max
  int rank = 0;                   // rank of the stacked flattenings
  double closure_residual = 0.0;  // max relative distance of [X_a, X_b] from the span
};

BasisDiagnostics diagnose(const LieAlgebraBasis& basis);

/// Flattened generators as columns (d² × m), row-major flattening per generator.
Matrix stacked_generators(const LieAlgebraBasis& basis);

/// E_ij - E_ji for i < j, in lexicographic order.
LieAlgebraBasis so_algebra_basis(int d);

/// The 14-parameter G2 generator H(x) on R^7; x[0] is x_1.
Matrix g2_generator(std::span<const double> x);
LieAlgebraBasis g2_algebra_basis();

/// Real 2k×2k form [[Re u, -Im u], [Im u, Re u]] of a complex k×k matrix.
Matrix su_real_embedding(const CMatrix& u);

/// [[0, I], [-I, 0]] of size 2k.
Matrix symplectic_form(int k);

/// The 8-parameter SU(3) generator on R^6; x[0] is x_1.
Matrix su3_generator(std::span<const double> x);
LieAlgebraBasis su3_real_algebra_basis();

/// su(k) realified on R^(2k). k = 3 returns the hand-transcribed table above;
/// other k use the standard basis (E_ab - E_ba, i(E_ab + E_ba), i(E_aa - E_a+1,a+1)).
LieAlgebraBasis su_real_algebra_basis(int k);

enum class GroupFamily { SpecialOrthogonal, G2, SuReal, InversionContaining };

struct GroupSpec {
  int d = 0;
  GroupFamily family = GroupFamily::SpecialOrthogonal;
  std::string name;
  std::optional<LieAlgebraBasis> algebra;
  bool contains_inversion = false;
  std::vector<std::string> successors;  // escalation order, ends at special-orthogonal

  bool has_algebra() const { return algebra.has_value(); }
};

GroupSpec special_orthogonal_group(int d);
GroupSpec g2_group();
GroupSpec su_real_group(int k);
GroupSpec inversion_containing_group(int d);

/// Accepts the canonical names ("special-orthogonal", "g2", "su-real(k)",
/// "inversion-containing") and the short forms so, su, inversion.
GroupSpec group_from_name(std::string_view name, int d);

/// SO(d) for odd d ≠ 7, G2 for d = 7, SU(d/2) for
/// d ≡ 2 mod 4 (d > 2), otherwise an inversion-containing group.
GroupSpec minimal_transitive_group(int d);

/// exp(tM) by scaling and squaring with a Taylor series run to machine precision.
Matrix matrix_exp(const Matrix& m, double t = 1.0);

/// Real orthogonal matrix with unit determinant (checked to 1e-10).
class OrthogonalMatrix {
 public:
  static constexpr double kTolerance = 1e-10;
  explicit OrthogonalMatrix(Matrix entries);

  int dim() const { return static_cast<int>(r_.rows()); }
  const Matrix& matrix() const { return r_; }

 private:
  Matrix r_;
};

/// exp(Σ c_a X_a) with c_a uniform in [-π, π] from a seeded mt19937_64.
OrthogonalMatrix random_group_element(const LieAlgebraBasis& basis, std::uint64_t seed);

}  // namespace gspin
