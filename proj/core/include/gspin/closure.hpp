#pragma once

// Decision procedure: can an invariant pairwise interaction with a macroscopic
// field generate the transformation group of a d-dimensional generalized spin?

#include <string>
#include <vector>

#include "gspin/group_reps.hpp"
#include "gspin/invariant_solver.hpp"

namespace gspin {

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr double kCommutantTolerance = 1e-9;

struct MembershipReport {
  Matrix candidate;
  Matrix projection;
  double residual = 0.0;  // ‖G - proj‖ / ‖G‖, 0 for G = 0
  bool in_span = true;
};

MembershipReport algebra_membership(const Matrix& candidate, const LieAlgebraBasis& basis);

/// g_ij = a_ij + μ_ijk B_k.
Matrix field_generator(const InvariantTensor& mu, const Vector& field, const Matrix& a);
Matrix field_generator(const InvariantTensor& mu, const Vector& field);

/// Basis of {X ∈ span(basis) : X B = 0}. Rejects B = 0.
std::vector<Matrix> stabilizer_subalgebra(const LieAlgebraBasis& basis, const Vector& field);

/// True iff [G, X] vanishes (to 1e-9, scaled by ‖G‖‖X‖) for every X.
bool stabilizer_commutant_check(const Matrix& generator, const std::vector<Matrix>& stabilizer);

/// Linear-algebra summary of which generators from a candidate family survive
/// the algebra-membership and stabilizer-commutant requirements.
struct AdmissibleGenerators {
  int candidate_dim = 0;           // dim span(candidates)
  int in_algebra_dim = 0;          // dim span(candidates) ∩ span(algebra)
  int stabilizer_surviving_dim = 0;
  std::vector<Matrix> in_algebra;  // orthonormal (Frobenius) basis
  std::vector<Matrix> surviving;
};

AdmissibleGenerators admissible_generators(const std::vector<Matrix>& candidates,
                                           const LieAlgebraBasis& algebra,
                                           const std::vector<Matrix>& stabilizer);

/// One rung of the escalation chain.
struct GroupAttempt {
  std::string group;
  bool contains_inversion = false;
  int a_dim_invariant = 0;  // antisymmetric invariant 2-tensors
  int a_dim = 0;            // ... that also lie in the algebra
  int mu_dim = 0;           // invariant 3-tensors antisymmetric in slots 1,2
  std::vector<double> membership_residuals;  // per basis field e_k, worst μ basis element
  int admissible_mu_dim = 0;   // μ with μ·e_k in the algebra for every k
  int stabilizer_dim = 0;      // ... whose generators also commute with the stabilizers
  // Product-form witness for su-real groups: invariants of the real subgroup
  // I2⊗SO(k), contracted with e_1, filtered by algebra membership and the
  // stabilizer of e_1. -1 when not run.
  int witness_in_algebra_dim = -1;
  int witness_surviving_dim = -1;
  std::string outcome;  // "closed", "parity", "no-mu", "membership", "stabilizer"
};

struct ClosureVerdict {
  int d = 0;
  std::vector<std::string> chain;
  std::vector<GroupAttempt> attempts;
  int a_dim = 0;   // for the minimal group
  int mu_dim = 0;  // for the minimal group
  std::vector<double> membership_residuals;
  int stabilizer_dim = 0;
  bool closed_with_pairwise = false;
  std::vector<InvariantTensor> mu_basis;  // surviving interaction tensors when closed
  std::vector<Matrix> generators;         // μ·e_k for the surviving tensor when closed
  std::string notes;
};

inline constexpr int kMinVerdictDim = 2;
inline constexpr int kMaxVerdictDim = 10;

ClosureVerdict closure_verdict(int d);

}  // namespace gspin
