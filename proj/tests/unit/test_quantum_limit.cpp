#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "gspin/errors.hpp"
#include "gspin/quantum_limit.hpp"

using namespace gspin;

namespace {

using Cd = std::complex<double>;
using Mc = Eigen::MatrixXcd;

Mc pauli(int i) {
  Mc s(2, 2);
  if (i == 1) s << 0, 1, 1, 0;
  if (i == 2) s << 0, Cd(0, -1), Cd(0, 1), 0;
  if (i == 3) s << 1, 0, 0, -1;
  return s;
}

// σ_i acting on qubit q of n (qubit 0 is the most significant factor).
Mc site(const Mc& op, int q, int n) {
  Mc out = Mc::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = Eigen::kroneckerProduct(out, k == q ? op : Mc::Identity(2, 2)).eval();
  return out;
}

// Dense H = Σ J_n σ⁽⁰⁾·σ⁽ⁿ⁾ - J0 Σ_{n<m} (σ⁽ⁿ⁾·σ⁽ᵐ⁾ - 1).
Mc dense_hamiltonian(const std::vector<double>& j, double j0) {
  const int n = static_cast<int>(j.size()) + 1;
  Mc h = Mc::Zero(1 << n, 1 << n);
  for (int i = 1; i <= 3; ++i) {
    for (int b = 1; b < n; ++b) h += j[b - 1] * site(pauli(i), 0, n) * site(pauli(i), b, n);
    for (int b = 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) h -= j0 * site(pauli(i), b, n) * site(pauli(i), c, n);
  }
  for (int b = 1; b < n; ++b)
    for (int c = b + 1; c < n; ++c) h += j0 * Mc::Identity(1 << n, 1 << n);
  return h;
}

Eigen::VectorXcd evolve_dense(const Mc& h, const Eigen::VectorXcd& v, double t) {
  Eigen::SelfAdjointEigenSolver<Mc> es(h);
  const Eigen::VectorXcd phase = (Cd(0, 1) * t * es.eigenvalues().cast<Cd>()).array().exp();
  return es.eigenvectors() * (phase.asDiagonal() * (es.eigenvectors().adjoint() * v));
}

double oracle_fidelity(const std::vector<double>& j, Cd alpha, Cd beta, double t, double j0) {
  const int n = static_cast<int>(j.size());
  double s = 0.0;
  for (double x : j) s += x;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 << n);
  psi[0] = alpha;
  psi[1 << n] = beta;  // probe down
  const Eigen::VectorXcd out = evolve_dense(dense_hamiltonian(j, j0), psi, t);
  const Cd overlap = std::conj(alpha * std::exp(Cd(0, s * t))) * out[0] +
                     std::conj(beta * std::exp(Cd(0, -s * t))) * out[1 << n];
  return std::norm(overlap);
}

}  // namespace

TEST(QuantumLimit, SingleSpinSectorMatrix) {
  const Matrix h = SectorHamiltonian({0.5}).dense();
  Matrix expected(3, 3);
  expected << 0.5, 0, 0, 0, -0.5, 1.0, 0, 1.0, -0.5;
  EXPECT_EQ(h, expected);
}

TEST(QuantumLimit, ApplyMatchesDense) {
  const SectorHamiltonian h({0.3, 0.1, 0.3, 0.7}, 0.2);
  CVector v(6);
  v << Cd(1, 0), Cd(0, 1), Cd(0.5, 0), Cd(0, -0.2), Cd(0.1, 0.1), Cd(-1, 0);
  EXPECT_LT((h.apply(v) - h.dense().cast<Cd>() * v).norm(), 1e-13);
}

TEST(QuantumLimit, SectorEmbeddingMatchesFullSpaceOracle) {
  const std::vector<double> j{0.4, 0.9, 0.2};
  const SectorHamiltonian h(j, 0.3);
  const Mc full = dense_hamiltonian(j, 0.3);
  const Matrix sector = h.dense();
  for (int a = 0; a < h.sector_dim(); ++a)
    for (int b = 0; b < h.sector_dim(); ++b) {
      const Cd entry = full(sector_to_full_index(a, 3), sector_to_full_index(b, 3));
      EXPECT_NEAR(entry.real(), sector(a, b), 1e-13);
      EXPECT_NEAR(entry.imag(), 0.0, 1e-13);
    }
}

TEST(QuantumLimit, FidelityOfOneSpinBath) {
  for (double jv : {0.3, 1.0}) {
    for (double t : {0.0, 0.4, 1.7}) {
      const FidelityResult f = exact_fidelity({jv}, 0.0, 1.0, t);
      EXPECT_NEAR(f.fidelity, std::pow(std::cos(2 * jv * t), 2), 1e-10);
    }
  }
}

TEST(QuantumLimit, FidelityMatchesDenseOracle) {
  const Cd alpha(0.6, 0.0), beta(0.0, 0.8);
  for (const auto& j : {std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{0.1, 0.5, 0.9, 0.2}}) {
    for (double j0 : {0.0, 0.35}) {
      for (double t : {0.3, 1.1}) {
        EXPECT_NEAR(exact_fidelity(j, alpha, beta, t, j0).fidelity, oracle_fidelity(j, alpha, beta, t, j0),
                    1e-10);
      }
    }
  }
}

TEST(QuantumLimit, UpProbeIsStationary) {
  EXPECT_NEAR(exact_fidelity({0.2, 0.4}, 1.0, 0.0, 3.0).fidelity, 1.0, 1e-14);
}

TEST(QuantumLimit, NormsOfTheInteractionParts) {
  const std::vector<double> j{0.5, 0.25, 0.25};
  const Cd alpha(0.6, 0), beta(0, 0.8);
  const FidelityResult f = exact_fidelity(j, alpha, beta, 0.5);
  EXPECT_NEAR(f.chi_norm_sq, 1.0, 1e-14);
  EXPECT_NEAR(f.mu_norm_sq, 4 * 0.64 * (0.25 + 0.0625 + 0.0625), 1e-14);
}

TEST(QuantumLimit, BruteForceAgreement) {
  const Cd alpha(0.6, 0.0), beta(0.0, 0.8);
  for (int n : {1, 2, 5, 10}) {
    EXPECT_LE(brute_force_crosscheck(make_couplings(CouplingRule::Fixed, n), alpha, beta, 0.8), 1e-10) << n;
  }
  EXPECT_LE(brute_force_crosscheck({0.1, 0.7, 0.3, 0.3, 0.9, 0.2}, alpha, beta, 1.3), 1e-10);
  EXPECT_LE(brute_force_crosscheck({0.4, 0.4, 0.1, 0.2}, alpha, beta, 0.9, 0.5), 1e-10);
  EXPECT_THROW(brute_force_crosscheck(make_couplings(CouplingRule::Fixed, 11), alpha, beta, 0.8),
               GuardViolation);
}

TEST(QuantumLimit, FullSpaceHamiltonianMatchesOracle) {
  const std::vector<double> j{0.3, 0.8};
  const Mc h = Mc(full_space_hamiltonian(j, 0.4));
  EXPECT_LT((h - dense_hamiltonian(j, 0.4)).norm(), 1e-13);
  const Mc sz = Mc(total_sigma_z(3));
  EXPECT_LT((h * sz - sz * h).norm(), 1e-13);
}

TEST(QuantumLimit, ExpmApplyMatchesEigendecomposition) {
  const std::vector<double> j{0.3, 0.8, 0.5};
  const Eigen::SparseMatrix<Cd> h = full_space_hamiltonian(j);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v[3] = Cd(0.6, 0);
  v[9] = Cd(0, 0.8);
  EXPECT_LT((expm_apply(h, v, 2.5) - evolve_dense(Mc(h), v, 2.5)).norm(), 1e-11);
}

TEST(QuantumLimit, DeflatedPropagatorMatchesDenseSector) {
  std::vector<double> j;
  for (int i = 0; i < 60; ++i) j.push_back(0.01 * (i % 4 + 1));
  const SectorHamiltonian h(j);
  const SectorPropagator prop(h);
  EXPECT_EQ(prop.reduced_dim(), 5);  // |p⟩ plus one symmetric mode per coupling value
  const SectorState psi = SectorState::probe(Cd(0.6, 0), Cd(0, 0.8), 60);
  const Eigen::VectorXcd got = prop.evolve(psi, 3.0).amplitudes();
  const Eigen::VectorXcd want = evolve_dense(Mc(h.dense().cast<Cd>()), psi.amplitudes(), 3.0);
  EXPECT_LT((got - want).norm(), 1e-11);
}

TEST(QuantumLimit, ErrorScalesInverselyWithBathSize) {
  const ErrorScalingReport r =
      error_scaling_sweep({8, 16, 32, 64, 128, 256, 512, 1024, 2048, 4096}, CouplingRule::Fixed, 0.0, 1.0, 1.0);
  ASSERT_EQ(r.rows.size(), 10u);
  EXPECT_GE(r.slope, -1.15);
  EXPECT_LE(r.slope, -0.85);
  for (const ErrorScalingRow& row : r.rows) {
    EXPECT_NEAR(row.chi_norm_sq, 1.0, 1e-12);
    EXPECT_NEAR(row.ratio, 4.0 / row.n, 1e-12);
  }
  std::ostringstream csv;
  write_csv(csv, r);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "N,F,one_minus_F,chi2,mu2,ratio");
}

TEST(QuantumLimit, ConstantCouplingIsRescaledTime) {
  // J_n = 1 at time t is J_n = 1/N at time N t.
  for (int n : {8, 64}) {
    const double f_const = exact_fidelity(make_couplings(CouplingRule::Constant, n), 0.0, 1.0, 0.05).fidelity;
    const double f_fixed = exact_fidelity(make_couplings(CouplingRule::Fixed, n), 0.0, 1.0, 0.05 * n).fidelity;
    EXPECT_NEAR(f_const, f_fixed, 1e-12);
  }
}

TEST(QuantumLimit, RotatedFrame) {
  const Eigen::Vector3d n = Eigen::Vector3d(1.0, -2.0, 0.5).normalized();
  const std::vector<double> j{0.2, 0.5, 0.1};
  EXPECT_LE(rotated_frame_check(n, j, 1.3, 7), 1e-10);
  EXPECT_LE(rotated_frame_check(Eigen::Vector3d(0, 0, -1), j, 0.7, 3), 1e-10);
  const FidelityResult e3 = exact_fidelity(j, Cd(0.6, 0), Cd(0, 0.8), 1.3);
  EXPECT_NEAR(full_space_rotated_fidelity(n, j, Cd(0.6, 0), Cd(0, 0.8), 1.3), e3.fidelity, 1e-10);
}

TEST(QuantumLimit, InputValidation) {
  EXPECT_THROW(SectorHamiltonian({}), InvalidArgument);
  EXPECT_THROW(SectorHamiltonian({-1.0}), InvalidArgument);
  EXPECT_THROW(exact_fidelity({1.0}, 1.0, 1.0, 0.1), InvalidArgument);
  EXPECT_THROW(make_couplings(CouplingRule::Fixed, 0), InvalidArgument);
  EXPECT_DOUBLE_EQ(make_couplings(CouplingRule::Fixed, 4)[2], 0.25);
  EXPECT_DOUBLE_EQ(make_couplings(CouplingRule::Constant, 4, 0.5)[2], 0.5);
}
