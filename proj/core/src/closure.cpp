#include "gspin/closure.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

constexpr std::array<SymmetryConstraint, 1> kAntisym{SymmetryConstraint::AntisymmetricFirstPair};

Matrix stack(const std::vector<Matrix>& ms, Eigen::Index rows) {
  Matrix a(rows, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t c = 0; c < ms.size(); ++c) a.col(c) = flatten_row_major(ms[c]);
  return a;
}

std::vector<Matrix> unstack(const Matrix& cols, int d) {
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) out.push_back(unflatten_row_major(cols.col(c), d, d));
  return out;
}

// Orthonormal basis of span(A) ∩ span(B), as columns in the ambient space.
Matrix span_intersection(const Matrix& a, const Matrix& b) {
  const Matrix qa = column_span(a);
  const Matrix qb = column_span(b);
  if (qa.cols() == 0 || qb.cols() == 0) return Matrix(a.rows(), 0);
  Matrix joint(a.rows(), qa.cols() + qb.cols());
  joint << qa, -qb;
  const Matrix coeff = null_space(joint);
  if (coeff.cols() == 0) return Matrix(a.rows(), 0);
  return column_span(qa * coeff.topRows(qa.cols()));
}

// Kernel of A with singular values at or below abs_tol counted as zero. Used
// where A collects residuals that may all vanish, so a relative cut is useless.
Matrix absolute_null_space(const Matrix& a, double abs_tol) {
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > abs_tol) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Vector basis_vector(int d, int k) {
  Vector e = Vector::Zero(d);
  e[k] = 1.0;
  return e;
}

// Generators of the real subgroup diag(A, A), A ∈ so(k), inside su-real(k).
LieAlgebraBasis real_subgroup(int k) {
  LieAlgebraBasis sub{2 * k, "real-subgroup(" + std::to_string(k) + ")", {}};
  for (const Matrix& a : so_algebra_basis(k).generators) {
    Matrix x = Matrix::Zero(2 * k, 2 * k);
    x.topLeftCorner(k, k) = a;
    x.bottomRightCorner(k, k) = a;
    sub.generators.push_back(std::move(x));
  }
  return sub;
}

GroupAttempt attempt_group(const GroupSpec& group, ClosureVerdict& verdict) {
  GroupAttempt at;
  at.group = group.name;
  at.contains_inversion = group.contains_inversion;
  const int d = group.d;

  if (group.contains_inversion) {
    // Odd-rank tensors flip sign under -I, so μ vanishes identically.
    at.outcome = "parity";
    return at;
  }
  const LieAlgebraBasis& alg = *group.algebra;
  const Matrix alg_cols = stacked_generators(alg);

  const SolutionSpace a_space = invariant_tensors(group, 2, kAntisym);
  at.a_dim_invariant = a_space.dimension;
  if (a_space.dimension > 0) {
    Matrix a_cols(d * d, a_space.dimension);
    for (int c = 0; c < a_space.dimension; ++c) a_cols.col(c) = a_space.basis[c].components();
    at.a_dim = static_cast<int>(span_intersection(a_cols, alg_cols).cols());
  }

  const SolutionSpace mu_space = invariant_tensors(group, 3, kAntisym);
  at.mu_dim = mu_space.dimension;
  if (mu_space.dimension == 0) {
    at.outcome = "no-mu";
    return at;
  }

  // Per-field membership, then the joint linear condition on μ coefficients.
  const Matrix q = column_span(alg_cols);
  const Matrix outside = Matrix::Identity(d * d, d * d) - q * q.transpose();
  Matrix conditions(static_cast<Eigen::Index>(d) * d * d, mu_space.dimension);
  double scale = 0.0;
  for (int k = 0; k < d; ++k) {
    double worst = 0.0;
    for (int j = 0; j < mu_space.dimension; ++j) {
      const Matrix g = field_generator(mu_space.basis[j], basis_vector(d, k));
      worst = std::max(worst, algebra_membership(g, alg).residual);
      scale = std::max(scale, g.norm());
      conditions.block(static_cast<Eigen::Index>(k) * d * d, j, d * d, 1) =
          outside * flatten_row_major(g);
    }
    at.membership_residuals.push_back(worst);
  }
  const Matrix admissible = absolute_null_space(conditions, kMembershipTolerance * scale);
  at.admissible_mu_dim = static_cast<int>(admissible.cols());
  if (admissible.cols() == 0) {
    at.outcome = "membership";
    return at;
  }

  // Stabilizer condition [μ·e_k, X] = 0 for X fixing e_k.
  Matrix comm_rows;
  double comm_scale = 0.0;
  for (int k = 0; k < d; ++k) {
    const std::vector<Matrix> stab = stabilizer_subalgebra(alg, basis_vector(d, k));
    for (const Matrix& x : stab) {
      comm_scale = std::max(comm_scale, scale * x.norm());
      Matrix block(d * d, mu_space.dimension);
      for (int j = 0; j < mu_space.dimension; ++j)
        block.col(j) = flatten_row_major(
            commutator(field_generator(mu_space.basis[j], basis_vector(d, k)), x));
      Matrix grown(comm_rows.rows() + block.rows(), mu_space.dimension);
      if (comm_rows.rows() > 0) grown << comm_rows, block;
      else grown = block;
      comm_rows = std::move(grown);
    }
  }
  Matrix surviving = admissible;
  if (comm_rows.rows() > 0) {
    const Matrix inner = absolute_null_space(comm_rows * admissible, kCommutantTolerance * comm_scale);
    surviving = admissible * inner;
  }
  at.stabilizer_dim = static_cast<int>(surviving.cols());
  if (surviving.cols() == 0) {
    at.outcome = "stabilizer";
    return at;
  }

  at.outcome = "closed";
  const Matrix mu_coeff = canonicalize_basis(surviving);
  for (Eigen::Index c = 0; c < mu_coeff.cols(); ++c) {
    Vector t = Vector::Zero(mu_space.basis[0].components().size());
    for (int j = 0; j < mu_space.dimension; ++j) t += mu_coeff(j, c) * mu_space.basis[j].components();
    verdict.mu_basis.emplace_back(3, d, t, true);
  }
  for (int k = 0; k < d; ++k)
    verdict.generators.push_back(field_generator(verdict.mu_basis.front(), basis_vector(d, k)));
  return at;
}

// Product-form candidates for su-real groups: invariants of diag(A, A)
// contracted with e_1, filtered through the full algebra and stabilizer.
void su_real_witness(const GroupSpec& group, GroupAttempt& at) {
  const int d = group.d;
  const SolutionSpace sub = invariant_tensors(real_subgroup(d / 2), 3, kAntisym);
  std::vector<Matrix> candidates;
  for (const InvariantTensor& t : sub.basis) candidates.push_back(t.contract_last(basis_vector(d, 0)));
  const std::vector<Matrix> stab = stabilizer_subalgebra(*group.algebra, basis_vector(d, 0));
  const AdmissibleGenerators adm = admissible_generators(candidates, *group.algebra, stab);
  at.witness_in_algebra_dim = adm.in_algebra_dim;
  at.witness_surviving_dim = adm.stabilizer_surviving_dim;
}

std::string describe(const ClosureVerdict& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.attempts.size(); ++i) {
    const GroupAttempt& at = v.attempts[i];
    if (i > 0) out << "; ";
    out << at.group << ": ";
    if (at.outcome == "parity") {
      out << "contains -I, odd-order invariants vanish";
    } else if (at.outcome == "no-mu") {
      out << "no invariant 3-tensor antisymmetric in its first pair";
    } else if (at.outcome == "membership") {
      out << at.mu_dim << " invariant 3-tensor(s) but no combination whose field generators lie in "
          << "the algebra";
    } else if (at.outcome == "stabilizer") {
      out << "field generators in the algebra fail to commute with the stabilizers";
    } else {
      out << "closed by pairwise interaction (" << at.stabilizer_dim << " surviving tensor(s))";
    }
    if (at.witness_in_algebra_dim >= 0)
      out << "; product-form candidates: " << at.witness_in_algebra_dim << " in algebra, "
          << at.witness_surviving_dim << " commuting with the stabilizer of e1"
          << (at.witness_in_algebra_dim > 0 && at.witness_surviving_dim == 0 ? " (stabilizer exclusion)" : "");
  }
  return out.str();
}

}  // namespace

MembershipReport algebra_membership(const Matrix& candidate, const LieAlgebraBasis& basis) {
  if (candidate.rows() != basis.d || candidate.cols() != basis.d)
    throw InvalidArgument("algebra_membership: dimension mismatch");
  MembershipReport r;
  r.candidate = candidate;
  const Vector g = flatten_row_major(candidate);
  const Matrix q = column_span(stacked_generators(basis));
  const Vector p = q * (q.transpose() * g);
  r.projection = unflatten_row_major(p, basis.d, basis.d);
  const double norm = g.norm();
  r.residual = norm == 0.0 ? 0.0 : (g - p).norm() / norm;
  r.in_span = r.residual <= kMembershipTolerance;
  return r;
}

Matrix field_generator(const InvariantTensor& mu, const Vector& field, const Matrix& a) {
  Matrix g = mu.contract_last(field);
  if (a.rows() != g.rows() || a.cols() != g.cols())
    throw InvalidArgument("field_generator: a has wrong shape");
  return a + g;
}

Matrix field_generator(const InvariantTensor& mu, const Vector& field) {
  return mu.contract_last(field);
}

std::vector<Matrix> stabilizer_subalgebra(const LieAlgebraBasis& basis, const Vector& field) {
  if (field.size() != basis.d) throw InvalidArgument("stabilizer_subalgebra: dimension mismatch");
  if (field.norm() == 0.0) throw InvalidArgument("stabilizer_subalgebra: field must be nonzero");
  Matrix action(basis.d, basis.size());
  for (int a = 0; a < basis.size(); ++a) action.col(a) = basis.generators[a] * field;
  const Matrix coeff = null_space(action);
  const Matrix alg = stacked_generators(basis);
  if (coeff.cols() == 0) return {};
  return unstack(column_span(alg * coeff), basis.d);
}

bool stabilizer_commutant_check(const Matrix& generator, const std::vector<Matrix>& stabilizer) {
  const double gn = generator.norm();
  for (const Matrix& x : stabilizer) {
    if (commutator(generator, x).norm() > kCommutantTolerance * gn * x.norm()) return false;
  }
  return true;
}

AdmissibleGenerators admissible_generators(const std::vector<Matrix>& candidates,
                                           const LieAlgebraBasis& algebra,
                                           const std::vector<Matrix>& stabilizer) {
  AdmissibleGenerators out;
  const Eigen::Index n = static_cast<Eigen::Index>(algebra.d) * algebra.d;
  if (candidates.empty()) return out;
  const Matrix c = stack(candidates, n);
  out.candidate_dim = numerical_rank(c);
  const Matrix common = span_intersection(c, stacked_generators(algebra));
  out.in_algebra_dim = static_cast<int>(common.cols());
  out.in_algebra = unstack(common, algebra.d);
  if (common.cols() == 0) return out;

  Matrix surviving = common;
  if (!stabilizer.empty()) {
    double scale = 0.0;
    for (const Matrix& x : stabilizer) scale = std::max(scale, x.norm());
    Matrix conditions(n * static_cast<Eigen::Index>(stabilizer.size()), common.cols());
    for (std::size_t s = 0; s < stabilizer.size(); ++s)
      for (Eigen::Index j = 0; j < common.cols(); ++j)
        conditions.block(static_cast<Eigen::Index>(s) * n, j, n, 1) =
            flatten_row_major(commutator(out.in_algebra[j], stabilizer[s]));
    const Matrix coeff = absolute_null_space(conditions, kCommutantTolerance * scale);
    surviving = coeff.cols() == 0 ? Matrix(n, 0) : Matrix(common * coeff);
  }
  out.stabilizer_surviving_dim = static_cast<int>(surviving.cols());
  out.surviving = unstack(surviving, algebra.d);
  return out;
}

ClosureVerdict closure_verdict(int d) {
  if (d < kMinVerdictDim || d > kMaxVerdictDim)
    throw InvalidArgument("closure_verdict: d must lie in [" + std::to_string(kMinVerdictDim) + ", " +
                          std::to_string(kMaxVerdictDim) + "]");
  ClosureVerdict v;
  v.d = d;
  GroupSpec group = minimal_transitive_group(d);
  while (true) {
    v.chain.push_back(group.name);
    GroupAttempt at = attempt_group(group, v);
    if (group.family == GroupFamily::SuReal && !group.contains_inversion) su_real_witness(group, at);
    v.attempts.push_back(at);
    if (at.outcome == "closed") {
      v.closed_with_pairwise = true;
      break;
    }
    // Larger groups have fewer invariants, so these outcomes are final.
    if (at.outcome == "parity" || at.outcome == "no-mu") break;
    if (group.successors.empty()) break;
    const std::string next = group.successors.front();
    group = group_from_name(next, d);
  }
  const GroupAttempt& first = v.attempts.front();
  v.a_dim = first.a_dim;
  v.mu_dim = first.mu_dim;
  v.membership_residuals = first.membership_residuals;
  v.stabilizer_dim = first.stabilizer_dim;
  v.notes = describe(v);
  return v;
}

}  // namespace gspin
