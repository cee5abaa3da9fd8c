#pragma once

// Time evolution of generalized spins: precession under an effective
// generator, the mean-field reduction of pairwise interactions, the d = 3
// composite dynamics (quantum vs mirror-quantum branches), and the d = 4
// tensor-field (three-body) dynamics.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gspin/gbit.hpp"
#include "gspin/invariant_solver.hpp"

namespace gspin {

/// exp(tG) x0 for antisymmetric G (checked to 1e-10).
BlochVector evolve_bloch(const BlochVector& x0, const Matrix& generator, double t);

struct PairwiseInteraction {
  int d = 0;
  Matrix a;
  Matrix b;
  InvariantTensor mu;
  std::vector<double> beta;  // b^(s) = β_s b
  std::vector<double> coupling;  // μ^(s) = J_s μ

  PairwiseInteraction(Matrix a, Matrix b, InvariantTensor mu, std::vector<double> beta,
                      std::vector<double> coupling);
};

struct MeanFieldResult {
  Vector field;      // B = Σ_s J_s y^(s)
  Matrix generator;  // a + μ·B
  bool valid = false;  // b = 0, i.e. the reduced dynamics is reversible
};

MeanFieldResult mean_field_reduction(const PairwiseInteraction& interaction,
                                     const std::vector<BlochVector>& bath);

struct D3Sample {
  double t = 0.0;
  Eigen::Vector3d x;
  Eigen::Vector3d y;
  Eigen::Matrix3d T;
};

struct D3Trajectory {
  double a = 0.0;
  double b = 0.0;
  double dt = 0.0;
  std::vector<D3Sample> samples;

  CompositeState state(std::size_t i) const;
};

/// Classical RK4 on dx = a ε·T, dy = b ε·T, dT_ij = -a ε_ijk x_k - b ε_ijk y_k.
/// Samples at every step; the last step is shortened to land on t_max.
D3Trajectory integrate_composite_d3(const CompositeState& psi0, double a, double b, double t_max,
                                    double dt);

/// Halve dt from dt0 until successive final states differ by less than tol.
D3Trajectory integrate_composite_d3_refined(const CompositeState& psi0, double a, double b,
                                            double t_max, double dt0 = 1e-3, double tol = 1e-9,
                                            int max_halvings = 12);

/// {e3, ±e3, ±e3 e3ᵀ}.
CompositeState canonical_d3_state(int sign);

struct D3ClosedForm {
  Eigen::Vector3d x;
  Eigen::Vector3d y;
  Eigen::Matrix3d T;
};

/// Closed-form solutions for b = ±a from the canonical states. Valid for
/// (b = a, sign = +1), (b = a, sign = -1), (b = -a, sign = ±1).
D3ClosedForm d3_closed_form(double a, double b, int sign, double t);

/// Minimum of the composite probability over axis pairs (±e_i, ±e_j) and
/// n_directions seeded random unit pairs.
double positivity_scan(const CompositeState& psi, int n_directions, std::uint64_t seed);

enum class SolutionClass { Quantum, Mirror, Inadmissible };
std::string to_string(SolutionClass c);

struct Classification {
  SolutionClass kind = SolutionClass::Inadmissible;
  double min_probability = 0.0;  // over both canonical trajectories
};

/// b = -a → quantum, b = a → mirror, otherwise inadmissible; the canonical
/// trajectories are integrated over one period and positivity-scanned.
Classification classify_solution(double a, double b, int n_directions = 2000,
                                 std::uint64_t seed = 1);

/// ¼(I⊗I + x·σ⊗I + y·I⊗σ + T_ij σ_i⊗σ_j).
CMatrix density_matrix(const CompositeState& psi);

/// (a/2) Σ σ_i⊗σ_i.
CMatrix heisenberg_hamiltonian(double a);

/// max over the trajectory of ‖dρ/dt - i[H12, ρ]‖ (central finite difference
/// of ρ along the b = -a dynamics).
double heisenberg_consistency_check(double a, const CompositeState& psi0, double t_max = 2.0,
                                    double dt = 1e-4);
double heisenberg_consistency_check(double a);

/// Order-(d-2) field data for the d-dimensional tensor-field generator.
struct TensorField {
  int d = 4;
  Vector components;  // flat row-major, size d^(d-2)

  TensorField(int d, Vector components);
  static TensorField from_matrix(const Matrix& b);  // d = 4
};

/// G_ij = ε_{ij k1..k(d-2)} B_{k1..k(d-2)}, d ∈ {4, 5}.
Matrix tensor_field_generator(const TensorField& field);

/// d = 4 specialization: G_ij = ε_ijkl B_kl.
Matrix d4_three_body_generator(const TensorField& field);

/// B = N ⟨J⟩ n1 n2ᵀ for orthogonal unit n1, n2 in R^4.
TensorField d4_coherent_field(const Vector& n1, const Vector& n2, int count, double mean_coupling);

/// B = N ⟨J⟩ n1 ⊗ n2 ⊗ n3 for mutually orthogonal unit vectors in R^5.
TensorField d5_coherent_field(const Vector& n1, const Vector& n2, const Vector& n3, int count,
                              double mean_coupling);

struct BlochSample {
  double t = 0.0;
  Vector x;
};

/// x(t) = exp(tG) x0 on the grid 0, dt, ..., t_max.
std::vector<BlochSample> precess_trajectory(const BlochVector& x0, const Matrix& generator,
                                            double t_max, double dt);

/// CSV: t,x1,x2,x3,y1,y2,y3,T11,...,T33
void write_csv(std::ostream& out, const D3Trajectory& trajectory);
/// CSV: t,x1,...,xd
void write_csv(std::ostream& out, const std::vector<BlochSample>& trajectory);

}  // namespace gspin
