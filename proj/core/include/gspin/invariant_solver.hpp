#pragma once

// Invariant tensors of a matrix Lie algebra acting on (R^d)^⊗k, computed as the
// kernel of the Gram operator Σ_a L_aᵀ L_a with L_a = Σ_slots I⊗…⊗X_a⊗…⊗I.
//
// Tensors are stored flat and row-major: slot 1 is the most significant index,
// so (i1, ..., ik) maps to ((i1·d + i2)·d + ...)·d + ik. For order 3 the first
// slot is the row of a generator g_ij = μ_ijk B_k.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "gspin/group_reps.hpp"
#include "gspin/kernel.hpp"

namespace gspin {

/// Largest flat size d^k accepted by the solver.
inline constexpr long long kMaxTensorEntries = 20000;

class InvariantTensor {
 public:
  InvariantTensor(int order, int d, Vector components, bool normalized = false);

  int order() const { return order_; }
  int dim() const { return d_; }
  const Vector& components() const { return components_; }
  bool normalized() const { return normalized_; }

  /// 0-based multi-index access.
  double operator()(std::initializer_list<int> index) const;
  long long flat_index(std::span<const int> index) const;
  std::vector<int> multi_index(long long flat) const;

  InvariantTensor normalized_copy() const;

  /// Contraction over the last slot with a vector; order 3 gives a d×d matrix.
  Matrix contract_last(const Vector& b) const;

 private:
  int order_;
  int d_;
  Vector components_;
  bool normalized_;
};

/// ε_{i1…id}, ε_{12…d} = +1.
InvariantTensor levi_civita_tensor(int d);

/// Totally antisymmetric octonionic ψ on R^7 with ψ = +1 on the triples
/// 123, 145, 176, 246, 257, 347, 365 (1-based).
InvariantTensor octonion_tensor();

enum class SymmetryConstraint { None, AntisymmetricFirstPair, InversionParity };

struct SolutionSpace {
  int dimension = 0;
  std::vector<InvariantTensor> basis;  // orthonormal, canonicalized
  double threshold_used = 0.0;
  double gap_ratio = 0.0;  // 0 when decided by parity alone
  bool parity_shortcut = false;
};

/// Σ_a L_aᵀ L_a on the order-k tensor power. Guard: d^k <= kMaxTensorEntries.
SparseMatrix invariance_operator(const LieAlgebraBasis& basis, int order);

/// Action Σ_slots of X on a flat order-k tensor (the infinitesimal action L_X).
Vector apply_infinitesimal(const Matrix& x, const Vector& tensor, int d, int order);

/// R^{⊗k} applied to a flat tensor.
Vector apply_group_element(const Matrix& r, const Vector& tensor, int d, int order);

/// Kernel of the invariance operator intersected with the constraints.
/// Groups containing total inversion give dimension 0 for odd order without
/// any eigensolve. Throws InvalidArgument for even order on a group without
/// an algebra basis.
SolutionSpace invariant_tensors(const GroupSpec& group, int order,
                                std::span<const SymmetryConstraint> constraints = {},
                                const KernelOptions& options = {});

/// Lower-level entry point on a bare algebra.
SolutionSpace invariant_tensors(const LieAlgebraBasis& basis, int order,
                                std::span<const SymmetryConstraint> constraints = {},
                                bool contains_inversion = false,
                                const KernelOptions& options = {});

/// Multiplicity of the trivial representation in the k-fold tensor power.
int trivial_multiplicity(const GroupSpec& group, int order);

/// dim{M ∈ End(R^d ⊗ R^d) : [M, X⊗I + I⊗X] = 0 for every generator X}.
/// Guard: d <= 10.
int commutant_dimension(const GroupSpec& group);

/// max over seeded random R of ‖R^{⊗k}T - T‖ / ‖T‖.
double verify_invariance(const InvariantTensor& tensor, const GroupSpec& group, int samples,
                         std::uint64_t seed);

/// Orthonormalize columns, reduce against pivot coordinates, and fix signs so
/// that the first maximal-magnitude entry of every column is positive.
Matrix canonicalize_basis(const Matrix& basis);

}  // namespace gspin
