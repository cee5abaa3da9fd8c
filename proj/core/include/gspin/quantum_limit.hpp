#pragma once

// A probe spin-1/2 coupled by Heisenberg interaction H = Σ J_n σ⁽⁰⁾·σ⁽ⁿ⁾ to an
// N-spin bath aligned along e3. The dynamics is exact inside the sector
// spanned by |e⟩ (probe up, bath up), |p⟩ (probe down, bath up) and |b_n⟩
// (probe up, bath spin n down). Conventions: σ3|0⟩ = |0⟩, |0⟩ is "up",
// states evolve as exp(+itH).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "gspin/linalg.hpp"

namespace gspin {

/// Sector coordinates: 0 = |e⟩, 1 = |p⟩, 2 + n = |b_n⟩.
class SectorHamiltonian {
 public:
  /// ferromagnet_coupling J0 > 0 adds the uniform Heisenberg ferromagnet
  /// H0 = -J0 Σ_{n<m} σ⁽ⁿ⁾·σ⁽ᵐ⁾ with its aligned ground energy shifted to 0.
  SectorHamiltonian(std::vector<double> couplings, double ferromagnet_coupling = 0.0);

  int bath_size() const { return static_cast<int>(couplings_.size()); }
  int sector_dim() const { return bath_size() + 2; }
  const std::vector<double>& couplings() const { return couplings_; }
  double ferromagnet_coupling() const { return ferro_; }
  double coupling_sum() const { return sum_; }

  /// Dense (N+2)×(N+2) matrix. Guard: N <= 4096.
  Matrix dense() const;

  /// H v in O(N).
  CVector apply(const CVector& v) const;

 private:
  std::vector<double> couplings_;
  double ferro_;
  double sum_;
};

/// Unit-norm sector amplitudes.
class SectorState {
 public:
  explicit SectorState(CVector amplitudes);
  static SectorState probe(Complex alpha, Complex beta, int bath_size);

  const CVector& amplitudes() const { return amp_; }

 private:
  CVector amp_;
};

/// exp(itH) on the sector. Bath sites with equal coupling are deflated onto
/// their symmetric mode, leaving a reduced arrowhead matrix that is
/// diagonalized once; without the ferromagnet the cost is O(N) per evolution
/// plus one eigendecomposition of size (#distinct couplings + 1).
class SectorPropagator {
 public:
  explicit SectorPropagator(const SectorHamiltonian& h);

  SectorState evolve(const SectorState& psi, double t) const;
  int reduced_dim() const { return static_cast<int>(values_.size()); }

 private:
  struct Group {
    std::vector<int> sites;
    double diagonal = 0.0;
    Vector direction;  // normalized coupling pattern inside the group
  };
  SectorHamiltonian h_;
  double e_energy_ = 0.0;
  bool dense_ = false;
  std::vector<Group> groups_;
  Vector values_;
  Matrix vectors_;
};

struct FidelityResult {
  double fidelity = 0.0;
  double chi_norm_sq = 0.0;
  double mu_norm_sq = 0.0;
};

/// Overlap of the exact evolution of (α|e⟩ + β|p⟩) with the product evolution
/// under H_eff = (Σ J_n) σ3, plus the norms of the two parts of H|φ⟩|ψ0⟩.
FidelityResult exact_fidelity(const std::vector<double>& couplings, Complex alpha, Complex beta,
                              double t, double ferromagnet_coupling = 0.0);

enum class CouplingRule { Fixed, Constant };

/// Fixed: J_n = strength / N. Constant: J_n = strength.
std::vector<double> make_couplings(CouplingRule rule, int bath_size, double strength = 1.0);

struct ErrorScalingRow {
  int n = 0;
  double fidelity = 0.0;
  double one_minus_fidelity = 0.0;
  double chi_norm_sq = 0.0;
  double mu_norm_sq = 0.0;
  double ratio = 0.0;
};

struct ErrorScalingReport {
  std::vector<ErrorScalingRow> rows;  // sorted by N
  double slope = 0.0;  // least-squares slope of log(1-F) vs log N; NaN if undefined
};

ErrorScalingReport error_scaling_sweep(std::vector<int> sizes, CouplingRule rule, Complex alpha,
                                       Complex beta, double t, double strength = 1.0);

/// CSV columns N,F,one_minus_F,chi2,mu2,ratio.
void write_csv(std::ostream& out, const ErrorScalingReport& report);

/// Full 2^(N+1) Heisenberg Hamiltonian from Pauli tensor products; qubit 0 is
/// the probe and the most significant bit. Guard: N <= 10.
Eigen::SparseMatrix<Complex> full_space_hamiltonian(const std::vector<double>& couplings,
                                                    double ferromagnet_coupling = 0.0);

/// Total σz on N+1 qubits (diagonal).
Eigen::SparseMatrix<Complex> total_sigma_z(int qubits);

/// exp(itH) v for sparse Hermitian H by scaled Taylor steps.
CVector expm_apply(const Eigen::SparseMatrix<Complex>& h, const CVector& v, double t);

/// Full-space index of sector coordinate k.
long long sector_to_full_index(int k, int bath_size);

/// Max |amplitude| difference between sector and full-space evolution,
/// including any weight leaking outside the sector. Guard: N <= 10.
double brute_force_crosscheck(const std::vector<double>& couplings, Complex alpha, Complex beta,
                              double t, double ferromagnet_coupling = 0.0);

/// Frame covariance: |F(e3 frame) - F(n frame)| where the n-frame fidelity is
/// computed with the probe rotated by U (U σ3 U† = n·σ), bath |n⟩^⊗N, and the
/// target evolved under H_eff(n) = (Σ J_n) n·σ. The probe state is drawn from seed.
double rotated_frame_check(const Eigen::Vector3d& n, const std::vector<double>& couplings,
                           double t, std::uint64_t seed);

/// Fidelity of the full-space evolution of (U φ)⊗|n⟩^⊗N against
/// exp(itH_eff(n)) U φ ⊗ |n⟩^⊗N. Guard: N <= 10.
double full_space_rotated_fidelity(const Eigen::Vector3d& n, const std::vector<double>& couplings,
                                   Complex alpha, Complex beta, double t);

}  // namespace gspin
