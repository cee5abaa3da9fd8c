#include "gspin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct D3State {
  Vec3 x;
  Vec3 y;
  Mat3 t;

  D3State operator+(const D3State& o) const { return {x + o.x, y + o.y, t + o.t}; }
  D3State operator*(double s) const { return {x * s, y * s, t * s}; }
};

double eps3(int i, int j, int k) {
  return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
}

D3State rhs(const D3State& s, double a, double b) {
  D3State d{Vec3::Zero(), Vec3::Zero(), Mat3::Zero()};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const double e = eps3(i, j, k);
        if (e == 0.0) continue;
        d.x[i] += a * e * s.t(j, k);
        d.y[i] += b * e * s.t(j, k);
        d.t(i, j) -= e * (a * s.x[k] + b * s.y[k]);
      }
    }
  }
  return d;
}

D3State rk4_step(const D3State& s, double a, double b, double h) {
  const D3State k1 = rhs(s, a, b);
  const D3State k2 = rhs(s + k1 * (0.5 * h), a, b);
  const D3State k3 = rhs(s + k2 * (0.5 * h), a, b);
  const D3State k4 = rhs(s + k3 * h, a, b);
  return s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

D3State from_composite(const CompositeState& psi) {
  if (psi.dim() != 3) throw InvalidArgument("d = 3 dynamics: state must have d = 3");
  return {psi.x().components(), psi.y().components(), psi.correlations()};
}

double state_distance(const D3Sample& p, const D3Sample& q) {
  return std::max({(p.x - q.x).cwiseAbs().maxCoeff(), (p.y - q.y).cwiseAbs().maxCoeff(),
                   (p.T - q.T).cwiseAbs().maxCoeff()});
}

Vector random_unit(std::mt19937_64& rng, int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) {
    // Box-Muller on the portable uniform stream.
    const double u1 = 1.0 - unit_interval(rng());
    const double u2 = unit_interval(rng());
    v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  const double n = v.norm();
  return n > 0.0 ? Vector(v / n) : Vector(Vector::Unit(d, 0));
}

void require_antisymmetric(const Matrix& g, const char* what) {
  if (g.rows() != g.cols()) throw InvalidArgument(std::string(what) + ": generator must be square");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g + g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidArgument(std::string(what) + ": generator must be antisymmetric");
}

std::array<CMatrix, 4> pauli() {
  const Complex i1(0.0, 1.0);
  CMatrix id = CMatrix::Identity(2, 2);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, -i1, i1, 0.0;
  sz << 1.0, 0.0, 0.0, -1.0;
  return {id, sx, sy, sz};
}

CMatrix kron2(const CMatrix& a, const CMatrix& b) {
  CMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return out;
}

long long ipow(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

BlochVector evolve_bloch(const BlochVector& x0, const Matrix& generator, double t) {
  require_antisymmetric(generator, "evolve_bloch");
  if (generator.rows() != x0.dim()) throw InvalidArgument("evolve_bloch: dimension mismatch");
  return BlochVector(matrix_exp(generator, t) * x0.components(), 1e-9);
}

PairwiseInteraction::PairwiseInteraction(Matrix a_, Matrix b_, InvariantTensor mu_,
                                         std::vector<double> beta_, std::vector<double> coupling_)
    : d(mu_.dim()), a(std::move(a_)), b(std::move(b_)), mu(std::move(mu_)), beta(std::move(beta_)),
      coupling(std::move(coupling_)) {
  if (mu.order() != 3) throw InvalidArgument("PairwiseInteraction: μ must have order 3");
  if (a.rows() != d || a.cols() != d || b.rows() != d || b.cols() != d)
    throw InvalidArgument("PairwiseInteraction: a and b must be d×d");
  if (beta.size() != coupling.size())
    throw InvalidArgument("PairwiseInteraction: one β and one J per bath spin");
}

MeanFieldResult mean_field_reduction(const PairwiseInteraction& inter,
                                     const std::vector<BlochVector>& bath) {
  if (bath.size() != inter.coupling.size())
    throw InvalidArgument("mean_field_reduction: bath size does not match couplings");
  MeanFieldResult out;
  out.field = Vector::Zero(inter.d);
  for (std::size_t s = 0; s < bath.size(); ++s) {
    if (bath[s].dim() != inter.d) throw InvalidArgument("mean_field_reduction: dimension mismatch");
    out.field += inter.coupling[s] * bath[s].components();
  }
  out.generator = inter.a + inter.mu.contract_last(out.field);
  const bool b_zero = inter.b.cwiseAbs().maxCoeff() == 0.0 ||
                      std::all_of(inter.beta.begin(), inter.beta.end(),
                                  [](double v) { return v == 0.0; });
  out.valid = b_zero;
  return out;
}

CompositeState D3Trajectory::state(std::size_t i) const {
  const D3Sample& s = samples.at(i);
  return CompositeState(BlochVector(s.x, 1e-6), BlochVector(s.y, 1e-6), s.T);
}

D3Trajectory integrate_composite_d3(const CompositeState& psi0, double a, double b, double t_max,
                                    double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("integrate_composite_d3: dt must be positive");
  if (!(t_max >= 0.0)) throw InvalidArgument("integrate_composite_d3: t_max must be non-negative");
  D3Trajectory traj{a, b, dt, {}};
  D3State s = from_composite(psi0);
  double t = 0.0;
  traj.samples.push_back({t, s.x, s.y, s.t});
  const long long steps = static_cast<long long>(std::ceil(t_max / dt - 1e-9));
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  for (long long n = 1; n <= steps; ++n) {
    const double next = n == steps ? t_max : n * dt;
    s = rk4_step(s, a, b, next - t);
    t = next;
    traj.samples.push_back({t, s.x, s.y, s.t});
  }
  return traj;
}

D3Trajectory integrate_composite_d3_refined(const CompositeState& psi0, double a, double b,
                                            double t_max, double dt0, double tol,
                                            int max_halvings) {
  D3Trajectory prev = integrate_composite_d3(psi0, a, b, t_max, dt0);
  double dt = dt0;
  for (int h = 0; h < max_halvings; ++h) {
    dt *= 0.5;
    D3Trajectory next = integrate_composite_d3(psi0, a, b, t_max, dt);
    const double diff = state_distance(prev.samples.back(), next.samples.back());
    prev = std::move(next);
    if (diff < tol) return prev;
  }
  throw IndeterminateResult("integrate_composite_d3_refined: step refinement did not converge");
}

CompositeState canonical_d3_state(int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("canonical_d3_state: sign must be ±1");
  const BlochVector e3 = BlochVector::axis(3, 2);
  Matrix t = Matrix::Zero(3, 3);
  t(2, 2) = sign;
  return CompositeState(e3, BlochVector::axis(3, 2, sign), t);
}

D3ClosedForm d3_closed_form(double a, double b, int sign, double t) {
  if (sign != 1 && sign != -1) throw InvalidArgument("d3_closed_form: sign must be ±1");
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  const bool mirror = std::abs(b - a) <= tol;
  const bool quantum = std::abs(b + a) <= tol;
  if (!mirror && !quantum) throw InvalidArgument("d3_closed_form: requires b = ±a");
  D3ClosedForm out{Vec3(0, 0, 1), Vec3(0, 0, sign), Mat3::Zero()};
  out.T(2, 2) = sign;
  // Evolving branches: (b = a, +) and (b = -a, -); the other two are static.
  if ((mirror && sign == 1) || (quantum && sign == -1)) {
    const double c = std::cos(2.0 * a * t);
    const double s = std::sin(2.0 * a * t);
    out.x[2] = c;
    out.y[2] = sign * c;
    out.T(0, 1) = -s;
    out.T(1, 0) = s;
  }
  return out;
}

double positivity_scan(const CompositeState& psi, int n_directions, std::uint64_t seed) {
  const int d = psi.dim();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0})
          worst = std::min(worst, composite_probability(psi, BlochVector::axis(d, i, si),
                                                        BlochVector::axis(d, j, sj)));
  std::mt19937_64 rng(seed);
  for (int n = 0; n < n_directions; ++n) {
    const BlochVector u(random_unit(rng, d));
    const BlochVector v(random_unit(rng, d));
    worst = std::min(worst, composite_probability(psi, u, v));
  }
  return worst;
}

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Quantum:
      return "quantum";
    case SolutionClass::Mirror:
      return "mirror";
    case SolutionClass::Inadmissible:
      return "inadmissible";
  }
  return "inadmissible";
}

Classification classify_solution(double a, double b, int n_directions, std::uint64_t seed) {
  Classification out;
  const double tol = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(b + a) <= tol) out.kind = SolutionClass::Quantum;
  else if (std::abs(b - a) <= tol) out.kind = SolutionClass::Mirror;

  const double omega = std::sqrt(2.0 * (a * a + b * b));
  const double period = omega > 0.0 ? 2.0 * std::numbers::pi / omega : 1.0;
  // Sample about 200 states per trajectory for the positivity scan.
  const double dt = std::min(1e-3, period / 2000.0);
  out.min_probability = std::numeric_limits<double>::infinity();
  for (int sign : {1, -1}) {
    const D3Trajectory traj = integrate_composite_d3(canonical_d3_state(sign), a, b, period, dt);
    const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / 200);
    for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
      const D3Sample& s = traj.samples[i];
      // Off-branch trajectories may leave the ball; probe them without the norm check.
      const CompositeState psi(BlochVector(s.x, 1e3), BlochVector(s.y, 1e3), s.T);
      out.min_probability =
          std::min(out.min_probability, positivity_scan(psi, n_directions / 10 + 1, seed + i));
    }
  }
  return out;
}

CMatrix density_matrix(const CompositeState& psi) {
  if (psi.dim() != 3) throw InvalidArgument("density_matrix: requires d = 3");
  const auto s = pauli();
  CMatrix rho = kron2(s[0], s[0]);
  for (int i = 0; i < 3; ++i) {
    rho += psi.x()[i] * kron2(s[i + 1], s[0]);
    rho += psi.y()[i] * kron2(s[0], s[i + 1]);
    for (int j = 0; j < 3; ++j) rho += psi.correlations()(i, j) * kron2(s[i + 1], s[j + 1]);
  }
  return 0.25 * rho;
}

CMatrix heisenberg_hamiltonian(double a) {
  const auto s = pauli();
  CMatrix h = CMatrix::Zero(4, 4);
  for (int i = 1; i <= 3; ++i) h += kron2(s[i], s[i]);
  return 0.5 * a * h;
}

double heisenberg_consistency_check(double a, const CompositeState& psi0, double t_max, double dt) {
  const D3Trajectory traj = integrate_composite_d3(psi0, a, -a, t_max, dt);
  const CMatrix h = heisenberg_hamiltonian(a);
  const Complex i1(0.0, 1.0);
  double worst = 0.0;
  const std::size_t n = traj.samples.size();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h2 = traj.samples[k + 1].t - traj.samples[k - 1].t;
    // The final step may be shortened; skip the uneven stencil.
    if (std::abs(h2 - 2.0 * dt) > 1e-9 * dt) continue;
    const CMatrix rho = density_matrix(traj.state(k));
    const CMatrix drho =
        (density_matrix(traj.state(k + 1)) - density_matrix(traj.state(k - 1))) / h2;
    worst = std::max(worst, (drho - i1 * (h * rho - rho * h)).norm());
  }
  return worst;
}

double heisenberg_consistency_check(double a) {
  const BlochVector x(Vector(Eigen::Vector3d(0.6, 0.0, 0.8)));
  const BlochVector y(Vector(Eigen::Vector3d(0.0, 0.28, -0.96)));
  return std::max(heisenberg_consistency_check(a, canonical_d3_state(-1)),
                  heisenberg_consistency_check(a, product_state(x, y)));
}

TensorField::TensorField(int d_, Vector components_) : d(d_), components(std::move(components_)) {
  if (d != 4 && d != 5) throw InvalidArgument("TensorField: d must be 4 or 5");
  if (components.size() != ipow(d, d - 2))
    throw InvalidArgument("TensorField: expected d^(d-2) components");
}

TensorField TensorField::from_matrix(const Matrix& b) {
  if (b.rows() != 4 || b.cols() != 4) throw InvalidArgument("TensorField::from_matrix: need 4×4");
  return TensorField(4, flatten_row_major(b));
}

Matrix tensor_field_generator(const TensorField& field) {
  const int d = field.d;
  const InvariantTensor eps = levi_civita_tensor(d);
  const long long rest = ipow(d, d - 2);
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g(i, j) = eps.components().segment((static_cast<long long>(i) * d + j) * rest, rest)
                    .dot(field.components);
  return g;
}

Matrix d4_three_body_generator(const TensorField& field) {
  if (field.d != 4) throw InvalidArgument("d4_three_body_generator: field must have d = 4");
  return tensor_field_generator(field);
}

TensorField d4_coherent_field(const Vector& n1, const Vector& n2, int count, double mean_coupling) {
  if (n1.size() != 4 || n2.size() != 4) throw InvalidArgument("d4_coherent_field: need R^4 vectors");
  if (std::abs(n1.norm() - 1.0) > 1e-12 || std::abs(n2.norm() - 1.0) > 1e-12)
    throw InvalidArgument("d4_coherent_field: directions must be unit vectors");
  if (std::abs(n1.dot(n2)) > 1e-12) throw InvalidArgument("d4_coherent_field: need n1 ⊥ n2");
  if (count < 1) throw InvalidArgument("d4_coherent_field: count must be at least 1");
  return TensorField::from_matrix(count * mean_coupling * n1 * n2.transpose());
}

TensorField d5_coherent_field(const Vector& n1, const Vector& n2, const Vector& n3, int count,
                              double mean_coupling) {
  for (const Vector* n : {&n1, &n2, &n3}) {
    if (n->size() != 5) throw InvalidArgument("d5_coherent_field: need R^5 vectors");
    if (std::abs(n->norm() - 1.0) > 1e-12)
      throw InvalidArgument("d5_coherent_field: directions must be unit vectors");
  }
  if (std::abs(n1.dot(n2)) > 1e-12 || std::abs(n1.dot(n3)) > 1e-12 || std::abs(n2.dot(n3)) > 1e-12)
    throw InvalidArgument("d5_coherent_field: directions must be mutually orthogonal");
  if (count < 1) throw InvalidArgument("d5_coherent_field: count must be at least 1");
  Vector b(125);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) b[(i * 5 + j) * 5 + k] = count * mean_coupling * n1[i] * n2[j] * n3[k];
  return TensorField(5, std::move(b));
}

std::vector<BlochSample> precess_trajectory(const BlochVector& x0, const Matrix& generator,
                                            double t_max, double dt) {
  require_antisymmetric(generator, "precess_trajectory");
  if (generator.rows() != x0.dim()) throw InvalidArgument("precess_trajectory: dimension mismatch");
  if (!(dt > 0.0) || !(t_max >= 0.0))
    throw InvalidArgument("precess_trajectory: need dt > 0 and t_max >= 0");
  std::vector<BlochSample> out;
  const long long steps = static_cast<long long>(std::floor(t_max / dt + 1e-9));
  for (long long n = 0; n <= steps; ++n) {
    const double t = n * dt;
    out.push_back({t, matrix_exp(generator, t) * x0.components()});
  }
  return out;
}

void write_csv(std::ostream& out, const D3Trajectory& trajectory) {
  out << "t,x1,x2,x3,y1,y2,y3";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out << ",T" << i << j;
  out << '\n';
  out.precision(17);
  for (const D3Sample& s : trajectory.samples) {
    out << s.t;
    for (int i = 0; i < 3; ++i) out << ',' << s.x[i];
    for (int i = 0; i < 3; ++i) out << ',' << s.y[i];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out << ',' << s.T(i, j);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<BlochSample>& trajectory) {
  const Eigen::Index d = trajectory.empty() ? 0 : trajectory.front().x.size();
  out << 't';
  for (Eigen::Index i = 1; i <= d; ++i) out << ",x" << i;
  out << '\n';
  out.precision(17);
  for (const BlochSample& s : trajectory) {
    out << s.t;
    for (Eigen::Index i = 0; i < s.x.size(); ++i) out << ',' << s.x[i];
    out << '\n';
  }
}

}  // namespace gspin
