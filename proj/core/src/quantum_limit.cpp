#include "gspin/quantum_limit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

using CSparse = Eigen::SparseMatrix<Complex>;

constexpr int kMaxDenseBath = 4096;
constexpr int kMaxFullBath = 10;

void require_unit_norm(double norm2, const char* what) {
  if (std::abs(norm2 - 1.0) > 1e-10) throw InvalidArgument(std::string(what) + ": state must be normalized");
}

// exp(M) for a small complex matrix by scaling and squaring.
CMatrix small_expm(const CMatrix& m) {
  const Eigen::Index n = m.rows();
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
  const CMatrix a = m / std::ldexp(1.0, squarings);
  CMatrix sum = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-17 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

CMatrix n_dot_sigma(const Eigen::Vector3d& n) {
  const Complex i1(0.0, 1.0);
  CMatrix s(2, 2);
  s << n[2], n[0] - i1 * n[1], n[0] + i1 * n[1], -n[2];
  return s;
}

// U with U σ3 U† = n·σ; its first column is |n⟩.
CMatrix frame_rotation(const Eigen::Vector3d& n) {
  const double norm = n.norm();
  if (std::abs(norm - 1.0) > 1e-12) throw InvalidArgument("frame rotation: n must be a unit vector");
  const double theta = std::acos(std::clamp(n[2], -1.0, 1.0));
  const double phi = std::atan2(n[1], n[0]);
  const Complex i1(0.0, 1.0);
  CMatrix u(2, 2);
  u << std::cos(theta / 2), -std::exp(-i1 * phi) * std::sin(theta / 2),
      std::exp(i1 * phi) * std::sin(theta / 2), std::cos(theta / 2);
  return u;
}

CVector kron_power(const CVector& v, int copies, const CVector& lead) {
  CVector out = lead;
  for (int c = 0; c < copies; ++c) {
    CVector next(out.size() * v.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * v.size(), v.size()) = out[i] * v;
    out = std::move(next);
  }
  return out;
}

void require_full_bath(int n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + ": bath must have at least one spin");
  if (n > kMaxFullBath)
    throw GuardViolation(std::string(what) + ": full-space bath limited to " +
                         std::to_string(kMaxFullBath) + " spins");
}

}  // namespace

SectorHamiltonian::SectorHamiltonian(std::vector<double> couplings, double ferromagnet_coupling)
    : couplings_(std::move(couplings)), ferro_(ferromagnet_coupling) {
  if (couplings_.empty()) throw InvalidArgument("SectorHamiltonian: bath must have at least one spin");
  for (double j : couplings_)
    if (!std::isfinite(j) || j < 0.0)
      throw InvalidArgument("SectorHamiltonian: couplings must be finite and non-negative");
  if (!std::isfinite(ferro_) || ferro_ < 0.0)
    throw InvalidArgument("SectorHamiltonian: ferromagnet coupling must be non-negative");
  sum_ = std::accumulate(couplings_.begin(), couplings_.end(), 0.0);
}

Matrix SectorHamiltonian::dense() const {
  const int n = bath_size();
  if (n > kMaxDenseBath)
    throw GuardViolation("SectorHamiltonian::dense: bath limited to " + std::to_string(kMaxDenseBath));
  Matrix h = Matrix::Zero(n + 2, n + 2);
  h(0, 0) = sum_;
  h(1, 1) = -sum_;
  for (int k = 0; k < n; ++k) {
    h(1, 2 + k) = h(2 + k, 1) = 2.0 * couplings_[k];
    h(2 + k, 2 + k) = sum_ - 2.0 * couplings_[k];
  }
  if (ferro_ > 0.0) {
    // 2 J0 (N I - 1 1ᵀ) on the single-flip bath states.
    h.bottomRightCorner(n, n).array() -= 2.0 * ferro_;
    h.bottomRightCorner(n, n).diagonal().array() += 2.0 * ferro_ * n;
  }
  return h;
}

CVector SectorHamiltonian::apply(const CVector& v) const {
  const int n = bath_size();
  if (v.size() != n + 2) throw InvalidArgument("SectorHamiltonian::apply: dimension mismatch");
  CVector out(n + 2);
  out[0] = sum_ * v[0];
  Complex p = -sum_ * v[1];
  Complex bath_total = 0.0;
  for (int k = 0; k < n; ++k) bath_total += v[2 + k];
  for (int k = 0; k < n; ++k) {
    p += 2.0 * couplings_[k] * v[2 + k];
    out[2 + k] = 2.0 * couplings_[k] * v[1] + (sum_ - 2.0 * couplings_[k]) * v[2 + k];
    if (ferro_ > 0.0) out[2 + k] += 2.0 * ferro_ * (static_cast<double>(n) * v[2 + k] - bath_total);
  }
  out[1] = p;
  return out;
}

SectorState::SectorState(CVector amplitudes) : amp_(std::move(amplitudes)) {
  if (amp_.size() < 3) throw InvalidArgument("SectorState: need at least three amplitudes");
  require_unit_norm(amp_.squaredNorm(), "SectorState");
}

SectorState SectorState::probe(Complex alpha, Complex beta, int bath_size) {
  if (bath_size < 1) throw InvalidArgument("SectorState::probe: bath must have at least one spin");
  CVector v = CVector::Zero(bath_size + 2);
  v[0] = alpha;
  v[1] = beta;
  return SectorState(std::move(v));
}

SectorPropagator::SectorPropagator(const SectorHamiltonian& h) : h_(h), e_energy_(h.coupling_sum()) {
  const int n = h.bath_size();
  if (h.ferromagnet_coupling() > 0.0) {
    dense_ = true;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h.dense().bottomRightCorner(n + 1, n + 1));
    values_ = eig.eigenvalues();
    vectors_ = eig.eigenvectors();
    return;
  }
  // Sites sharing a coupling couple to |p⟩ only through their symmetric mode.
  std::map<double, std::vector<int>> by_coupling;
  for (int k = 0; k < n; ++k) by_coupling[h.couplings()[k]].push_back(k);
  const double s = h.coupling_sum();
  for (auto& [j, sites] : by_coupling) {
    Group g;
    g.sites = std::move(sites);
    g.diagonal = s - 2.0 * j;
    g.direction = Vector::Constant(static_cast<Eigen::Index>(g.sites.size()),
                                   1.0 / std::sqrt(static_cast<double>(g.sites.size())));
    groups_.push_back(std::move(g));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(groups_.size()) + 1;
  Matrix reduced = Matrix::Zero(m, m);
  reduced(0, 0) = -s;
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    const double coupling = 2.0 * h.couplings()[g.sites.front()] *
                            std::sqrt(static_cast<double>(g.sites.size()));
    reduced(0, 1 + gi) = reduced(1 + gi, 0) = coupling;
    reduced(1 + gi, 1 + gi) = g.diagonal;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
  values_ = eig.eigenvalues();
  vectors_ = eig.eigenvectors();
}

SectorState SectorPropagator::evolve(const SectorState& psi, double t) const {
  const int n = h_.bath_size();
  const CVector& v = psi.amplitudes();
  if (v.size() != n + 2) throw InvalidArgument("SectorPropagator::evolve: dimension mismatch");
  const Complex i1(0.0, 1.0);
  CVector out(n + 2);
  out[0] = std::exp(i1 * (e_energy_ * t)) * v[0];

  auto rotate = [&](const CVector& reduced) {
    CVector c = vectors_.transpose().cast<Complex>() * reduced;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(i1 * (values_[k] * t));
    return CVector(vectors_.cast<Complex>() * c);
  };

  if (dense_) {
    const CVector evolved = rotate(v.tail(n + 1));
    out.tail(n + 1) = evolved;
    return SectorState(std::move(out));
  }

  CVector reduced(static_cast<Eigen::Index>(groups_.size()) + 1);
  reduced[0] = v[1];
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    Complex c = 0.0;
    for (std::size_t s = 0; s < g.sites.size(); ++s) c += g.direction[s] * v[2 + g.sites[s]];
    reduced[1 + gi] = c;
    // The complement of the symmetric mode is an eigenspace with energy g.diagonal.
    const Complex phase = std::exp(i1 * (g.diagonal * t));
    for (std::size_t s = 0; s < g.sites.size(); ++s)
      out[2 + g.sites[s]] = phase * (v[2 + g.sites[s]] - c * g.direction[s]);
  }
  const CVector evolved = rotate(reduced);
  out[1] = evolved[0];
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    for (std::size_t s = 0; s < g.sites.size(); ++s)
      out[2 + g.sites[s]] += evolved[1 + gi] * g.direction[s];
  }
  return SectorState(std::move(out));
}

FidelityResult exact_fidelity(const std::vector<double>& couplings, Complex alpha, Complex beta,
                              double t, double ferromagnet_coupling) {
  const SectorHamiltonian h(couplings, ferromagnet_coupling);
  const SectorPropagator prop(h);
  const SectorState psi = prop.evolve(SectorState::probe(alpha, beta, h.bath_size()), t);
  const Complex i1(0.0, 1.0);
  const double s = h.coupling_sum();
  // Product evolution under H_eff = S σ3: α e^{itS}|e⟩ + β e^{-itS}|p⟩.
  const Complex overlap = std::conj(alpha * std::exp(i1 * (s * t))) * psi.amplitudes()[0] +
                          std::conj(beta * std::exp(-i1 * (s * t))) * psi.amplitudes()[1];
  FidelityResult out;
  out.fidelity = std::norm(overlap);
  out.chi_norm_sq = s * s * (std::norm(alpha) + std::norm(beta));
  double j2 = 0.0;
  for (double j : couplings) j2 += j * j;
  out.mu_norm_sq = 4.0 * std::norm(beta) * j2;
  return out;
}

std::vector<double> make_couplings(CouplingRule rule, int bath_size, double strength) {
  if (bath_size < 1) throw InvalidArgument("make_couplings: bath must have at least one spin");
  if (!(strength >= 0.0)) throw InvalidArgument("make_couplings: strength must be non-negative");
  const double j = rule == CouplingRule::Fixed ? strength / bath_size : strength;
  return std::vector<double>(static_cast<std::size_t>(bath_size), j);
}

ErrorScalingReport error_scaling_sweep(std::vector<int> sizes, CouplingRule rule, Complex alpha,
                                       Complex beta, double t, double strength) {
  if (sizes.empty()) throw InvalidArgument("error_scaling_sweep: no bath sizes");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  ErrorScalingReport report;
  std::vector<double> lx, ly;
  for (int n : sizes) {
    const FidelityResult f = exact_fidelity(make_couplings(rule, n, strength), alpha, beta, t);
    ErrorScalingRow row;
    row.n = n;
    row.fidelity = f.fidelity;
    row.one_minus_fidelity = 1.0 - f.fidelity;
    row.chi_norm_sq = f.chi_norm_sq;
    row.mu_norm_sq = f.mu_norm_sq;
    row.ratio = f.chi_norm_sq > 0.0 ? f.mu_norm_sq / f.chi_norm_sq
                                    : std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back(row);
    if (row.one_minus_fidelity > 0.0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(row.one_minus_fidelity));
    }
  }
  report.slope = std::numeric_limits<double>::quiet_NaN();
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx > 0.0) report.slope = sxy / sxx;
  }
  return report;
}

void write_csv(std::ostream& out, const ErrorScalingReport& report) {
  out << "N,F,one_minus_F,chi2,mu2,ratio\n";
  out.precision(17);
  for (const ErrorScalingRow& r : report.rows)
    out << r.n << ',' << r.fidelity << ',' << r.one_minus_fidelity << ',' << r.chi_norm_sq << ','
        << r.mu_norm_sq << ',' << r.ratio << '\n';
}

Eigen::SparseMatrix<Complex> full_space_hamiltonian(const std::vector<double>& couplings,
                                                    double ferromagnet_coupling) {
  const int n = static_cast<int>(couplings.size());
  require_full_bath(n, "full_space_hamiltonian");
  const int qubits = n + 1;
  const long long dim = 1LL << qubits;
  std::vector<Eigen::Triplet<Complex>> trip;
  // σ_p·σ_q = 2 SWAP - 1 on qubits p, q; qubit q sits at bit (qubits-1-q).
  auto add_pair = [&](int p, int q, double w) {
    const long long bp = 1LL << (qubits - 1 - p);
    const long long bq = 1LL << (qubits - 1 - q);
    for (long long s = 0; s < dim; ++s) {
      const bool up = (s & bp) != 0;
      const bool uq = (s & bq) != 0;
      if (up == uq) {
        trip.emplace_back(s, s, w);
      } else {
        trip.emplace_back(s, s, -w);
        trip.emplace_back(s ^ bp ^ bq, s, 2.0 * w);
      }
    }
  };
  for (int k = 0; k < n; ++k) add_pair(0, k + 1, couplings[k]);
  if (ferromagnet_coupling > 0.0) {
    for (int p = 1; p <= n; ++p) {
      for (int q = p + 1; q <= n; ++q) {
        add_pair(p, q, -ferromagnet_coupling);
        for (long long s = 0; s < dim; ++s) trip.emplace_back(s, s, ferromagnet_coupling);
      }
    }
  }
  CSparse h(dim, dim);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

Eigen::SparseMatrix<Complex> total_sigma_z(int qubits) {
  if (qubits < 1 || qubits > kMaxFullBath + 1)
    throw GuardViolation("total_sigma_z: qubit count out of range");
  const long long dim = 1LL << qubits;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (long long s = 0; s < dim; ++s) {
    const int down = std::popcount(static_cast<unsigned long long>(s));
    trip.emplace_back(s, s, static_cast<double>(qubits - 2 * down));
  }
  CSparse z(dim, dim);
  z.setFromTriplets(trip.begin(), trip.end());
  return z;
}

CVector expm_apply(const Eigen::SparseMatrix<Complex>& h, const CVector& v, double t) {
  if (h.rows() != h.cols() || h.cols() != v.size())
    throw InvalidArgument("expm_apply: dimension mismatch");
  double norm = 0.0;
  for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
    double s = 0.0;
    for (CSparse::InnerIterator it(h, c); it; ++it) s += std::abs(it.value());
    norm = std::max(norm, s);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm / 0.5)));
  const Complex factor(0.0, t / steps);
  CVector cur = v;
  for (int s = 0; s < steps; ++s) {
    CVector term = cur;
    CVector sum = cur;
    for (int k = 1; k < 60; ++k) {
      term = (factor / static_cast<double>(k)) * (h * term);
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) break;
    }
    cur = std::move(sum);
  }
  return cur;
}

long long sector_to_full_index(int k, int bath_size) {
  if (bath_size < 1 || k < 0 || k >= bath_size + 2)
    throw InvalidArgument("sector_to_full_index: index out of range");
  if (k == 0) return 0;
  if (k == 1) return 1LL << bath_size;
  return 1LL << (bath_size - 1 - (k - 2));
}

double brute_force_crosscheck(const std::vector<double>& couplings, Complex alpha, Complex beta,
                              double t, double ferromagnet_coupling) {
  const int n = static_cast<int>(couplings.size());
  require_full_bath(n, "brute_force_crosscheck");
  const SectorHamiltonian h(couplings, ferromagnet_coupling);
  const SectorState sector = SectorPropagator(h).evolve(SectorState::probe(alpha, beta, n), t);

  const CSparse full = full_space_hamiltonian(couplings, ferromagnet_coupling);
  CVector v = CVector::Zero(full.rows());
  v[sector_to_full_index(0, n)] = alpha;
  v[sector_to_full_index(1, n)] = beta;
  CVector w = expm_apply(full, v, t);
  double worst = 0.0;
  for (int k = 0; k < n + 2; ++k) {
    const long long idx = sector_to_full_index(k, n);
    worst = std::max(worst, std::abs(w[idx] - sector.amplitudes()[k]));
    w[idx] = 0.0;
  }
  return std::max(worst, w.norm());
}

double rotated_frame_check(const Eigen::Vector3d& n, const std::vector<double>& couplings, double t,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double theta = std::acos(1.0 - 2.0 * unit_interval(rng()));
  const double phi = 2.0 * std::acos(-1.0) * unit_interval(rng());
  const Complex alpha = std::cos(theta / 2);
  const Complex beta = std::polar(std::sin(theta / 2), phi);

  const FidelityResult e3 = exact_fidelity(couplings, alpha, beta, t);

  // n frame: evolving (Uφ)⊗|n⟩^⊗N equals U^⊗(N+1) applied to the e3-frame
  // sector evolution, and ⟨n|^⊗N U^⊗N keeps only the |e⟩, |p⟩ amplitudes.
  const SectorHamiltonian h(couplings);
  const SectorState psi = SectorPropagator(h).evolve(SectorState::probe(alpha, beta, h.bath_size()), t);
  const CMatrix u = frame_rotation(n);
  const Complex i1(0.0, 1.0);
  CVector phi0(2);
  phi0 << alpha, beta;
  const CVector target = small_expm(i1 * (h.coupling_sum() * t) * n_dot_sigma(n)) * (u * phi0);
  CVector probe(2);
  probe << psi.amplitudes()[0], psi.amplitudes()[1];
  const double f_n = std::norm(target.dot(u * probe));
  return std::abs(e3.fidelity - f_n);
}

double full_space_rotated_fidelity(const Eigen::Vector3d& n, const std::vector<double>& couplings,
                                   Complex alpha, Complex beta, double t) {
  const int bath = static_cast<int>(couplings.size());
  require_full_bath(bath, "full_space_rotated_fidelity");
  require_unit_norm(std::norm(alpha) + std::norm(beta), "full_space_rotated_fidelity");
  const CMatrix u = frame_rotation(n);
  CVector phi0(2);
  phi0 << alpha, beta;
  const CVector probe = u * phi0;
  const CVector up_n = u.col(0);
  const CVector start = kron_power(up_n, bath, probe);
  const CVector evolved = expm_apply(full_space_hamiltonian(couplings), start, t);
  const double s = std::accumulate(couplings.begin(), couplings.end(), 0.0);
  const Complex i1(0.0, 1.0);
  const CVector target_probe = small_expm(i1 * (s * t) * n_dot_sigma(n)) * probe;
  const CVector target = kron_power(up_n, bath, target_probe);
  return std::norm(target.dot(evolved));
}

}  // namespace gspin
