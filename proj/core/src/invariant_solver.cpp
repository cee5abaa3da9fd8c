#include "gspin/invariant_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

long long ipow(int base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long long checked_size(int d, int order, const char* what) {
  if (d < 1 || order < 1) throw InvalidArgument(std::string(what) + ": d and order must be positive");
  long long n = 1;
  for (int i = 0; i < order; ++i) {
    n *= d;
    if (n > kMaxTensorEntries)
      throw GuardViolation(std::string(what) + ": d^k exceeds " + std::to_string(kMaxTensorEntries));
  }
  return n;
}

// Applies x to one slot of a flat tensor: out[p, i, q] = Σ_j x(i, j) in[p, j, q].
void apply_slot(const Matrix& x, const Vector& in, Vector& out, int d, long long stride,
                long long outer) {
  const long long block = stride * d;
  for (long long p = 0; p < outer; ++p) {
    for (long long q = 0; q < stride; ++q) {
      const long long base = p * block + q;
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += x(i, j) * in[base + j * stride];
        out[base + i * stride] += s;
      }
    }
  }
}

void require_tensor(const Vector& t, int d, int order, const char* what) {
  if (t.size() != checked_size(d, order, what))
    throw InvalidArgument(std::string(what) + ": tensor size does not match d^order");
}

// Projector onto tensors symmetric in slots 1,2: (I + S12)/2.
SparseMatrix symmetric_first_pair_projector(int d, int order) {
  const long long n = ipow(d, order);
  const long long rest = ipow(d, order - 2);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * n);
  for (long long f = 0; f < n; ++f) {
    const long long i = f / (d * rest);
    const long long j = (f / rest) % d;
    const long long r = f % rest;
    const long long g = (j * d + i) * rest + r;
    trip.emplace_back(f, f, 0.5);
    trip.emplace_back(f, g, 0.5);
  }
  SparseMatrix p(n, n);
  p.setFromTriplets(trip.begin(), trip.end());
  return p;
}

SolutionSpace from_kernel(const KernelResult& k, int d, int order) {
  SolutionSpace out;
  out.threshold_used = k.threshold;
  out.gap_ratio = k.gap_ratio;
  const Matrix basis = canonicalize_basis(k.basis);
  out.dimension = static_cast<int>(basis.cols());
  for (Eigen::Index c = 0; c < basis.cols(); ++c)
    out.basis.emplace_back(order, d, basis.col(c), true);
  return out;
}

}  // namespace

InvariantTensor::InvariantTensor(int order, int d, Vector components, bool normalized)
    : order_(order), d_(d), components_(std::move(components)), normalized_(normalized) {
  require_tensor(components_, d_, order_, "InvariantTensor");
}

long long InvariantTensor::flat_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_)
    throw InvalidArgument("InvariantTensor: index has wrong length");
  long long f = 0;
  for (int i : index) {
    if (i < 0 || i >= d_) throw InvalidArgument("InvariantTensor: index out of range");
    f = f * d_ + i;
  }
  return f;
}

std::vector<int> InvariantTensor::multi_index(long long flat) const {
  if (flat < 0 || flat >= components_.size())
    throw InvalidArgument("InvariantTensor: flat index out of range");
  std::vector<int> idx(order_);
  for (int s = order_ - 1; s >= 0; --s) {
    idx[s] = static_cast<int>(flat % d_);
    flat /= d_;
  }
  return idx;
}

double InvariantTensor::operator()(std::initializer_list<int> index) const {
  return components_[flat_index(std::span<const int>(index.begin(), index.size()))];
}

InvariantTensor InvariantTensor::normalized_copy() const {
  const double n = components_.norm();
  if (n == 0.0) throw InvalidArgument("InvariantTensor: cannot normalize the zero tensor");
  return InvariantTensor(order_, d_, components_ / n, true);
}

Matrix InvariantTensor::contract_last(const Vector& b) const {
  if (order_ != 3) throw InvalidArgument("InvariantTensor::contract_last: order must be 3");
  if (b.size() != d_) throw InvalidArgument("InvariantTensor::contract_last: dimension mismatch");
  Matrix m(d_, d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      m(i, j) = components_.segment((static_cast<long long>(i) * d_ + j) * d_, d_).dot(b);
  return m;
}

InvariantTensor levi_civita_tensor(int d) {
  const long long n = checked_size(d, d, "levi_civita_tensor");
  Vector t = Vector::Zero(n);
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    long long f = 0;
    for (int p : perm) f = f * d + p;
    t[f] = permutation_sign(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return InvariantTensor(d, d, std::move(t));
}

InvariantTensor octonion_tensor() {
  constexpr std::array<std::array<int, 3>, 7> triples{
      {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 6, 5}}};
  Vector t = Vector::Zero(343);
  for (const auto& tr : triples) {
    std::array<int, 3> perm{0, 1, 2};
    do {
      const int i = tr[perm[0]] - 1;
      const int j = tr[perm[1]] - 1;
      const int k = tr[perm[2]] - 1;
      t[(i * 7 + j) * 7 + k] = permutation_sign(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return InvariantTensor(3, 7, std::move(t));
}

SparseMatrix invariance_operator(const LieAlgebraBasis& basis, int order) {
  const int d = basis.d;
  const long long n = checked_size(d, order, "invariance_operator");
  SparseMatrix m(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  for (const Matrix& x : basis.generators) {
    trip.clear();
    for (long long f = 0; f < n; ++f) {
      long long stride = 1;
      for (int s = order - 1; s >= 0; --s) {
        const int j = static_cast<int>((f / stride) % d);
        const long long base = f - j * stride;
        for (int i = 0; i < d; ++i) {
          const double v = x(i, j);
          if (v != 0.0) trip.emplace_back(base + i * stride, f, v);
        }
        stride *= d;
      }
    }
    SparseMatrix l(n, n);
    l.setFromTriplets(trip.begin(), trip.end());
    m += SparseMatrix(l.transpose() * l);
  }
  m.prune(0.0);
  return m;
}

Vector apply_infinitesimal(const Matrix& x, const Vector& tensor, int d, int order) {
  require_tensor(tensor, d, order, "apply_infinitesimal");
  Vector out = Vector::Zero(tensor.size());
  long long stride = 1;
  for (int s = order - 1; s >= 0; --s) {
    apply_slot(x, tensor, out, d, stride, tensor.size() / (stride * d));
    stride *= d;
  }
  return out;
}

Vector apply_group_element(const Matrix& r, const Vector& tensor, int d, int order) {
  require_tensor(tensor, d, order, "apply_group_element");
  Vector cur = tensor;
  long long stride = 1;
  for (int s = order - 1; s >= 0; --s) {
    Vector next = Vector::Zero(cur.size());
    apply_slot(r, cur, next, d, stride, cur.size() / (stride * d));
    cur = std::move(next);
    stride *= d;
  }
  return cur;
}

SolutionSpace invariant_tensors(const LieAlgebraBasis& basis, int order,
                                std::span<const SymmetryConstraint> constraints,
                                bool contains_inversion, const KernelOptions& options) {
  const int d = basis.d;
  const long long n = checked_size(d, order, "invariant_tensors");
  bool parity = contains_inversion;
  bool antisym = false;
  for (SymmetryConstraint c : constraints) {
    if (c == SymmetryConstraint::InversionParity) parity = true;
    if (c == SymmetryConstraint::AntisymmetricFirstPair) {
      if (order < 2) throw InvalidArgument("invariant_tensors: antisymmetry needs order >= 2");
      antisym = true;
    }
  }
  if (parity && order % 2 == 1) {
    SolutionSpace out;
    out.parity_shortcut = true;
    return out;
  }

  SparseMatrix m = invariance_operator(basis, order);
  if (antisym) {
    // Penalize the symmetric part with weight comparable to the spectrum.
    double scale = Vector(m.diagonal()).maxCoeff();
    if (scale == 0.0) scale = 1.0;
    m += scale * symmetric_first_pair_projector(d, order);
  }
  if (m.nonZeros() == 0) {
    // No generators and no constraints: everything is invariant.
    KernelResult k;
    k.basis = Matrix::Identity(n, n);
    k.gap_ratio = std::numeric_limits<double>::infinity();
    return from_kernel(k, d, order);
  }
  return from_kernel(psd_kernel(m, options), d, order);
}

SolutionSpace invariant_tensors(const GroupSpec& group, int order,
                                std::span<const SymmetryConstraint> constraints,
                                const KernelOptions& options) {
  if (!group.has_algebra()) {
    const bool odd = order % 2 == 1;
    if (group.contains_inversion && odd) {
      SolutionSpace out;
      out.parity_shortcut = true;
      return out;
    }
    throw InvalidArgument("invariant_tensors: group '" + group.name +
                          "' has no algebra basis; only odd orders are decided by parity");
  }
  return invariant_tensors(*group.algebra, order, constraints, group.contains_inversion, options);
}

int trivial_multiplicity(const GroupSpec& group, int order) {
  return invariant_tensors(group, order).dimension;
}

int commutant_dimension(const GroupSpec& group) {
  if (!group.has_algebra())
    throw InvalidArgument("commutant_dimension: group '" + group.name + "' has no algebra basis");
  const int d = group.d;
  if (d > 10) throw GuardViolation("commutant_dimension: d must be at most 10");
  const int n = d * d;
  using ColSparse = Eigen::SparseMatrix<double>;
  ColSparse id(d, d), idn(n, n);
  id.setIdentity();
  idn.setIdentity();
  SparseMatrix gram(static_cast<long long>(n) * n, static_cast<long long>(n) * n);
  for (const Matrix& x : group.algebra->generators) {
    // D = X⊗I + I⊗X on R^d⊗R^d; [M, D] = 0 ⇔ (I⊗D - Dᵀ⊗I) vec(M) = 0.
    const ColSparse xs = x.sparseView();
    const ColSparse dx = ColSparse(Eigen::kroneckerProduct(xs, id)) +
                         ColSparse(Eigen::kroneckerProduct(id, xs));
    const ColSparse dxt = dx.transpose();
    const ColSparse k =
        ColSparse(Eigen::kroneckerProduct(idn, dx)) - ColSparse(Eigen::kroneckerProduct(dxt, idn));
    gram += SparseMatrix(k.transpose() * k);
  }
  return static_cast<int>(psd_kernel(gram).basis.cols());
}

double verify_invariance(const InvariantTensor& tensor, const GroupSpec& group, int samples,
                         std::uint64_t seed) {
  if (!group.has_algebra())
    throw InvalidArgument("verify_invariance: group '" + group.name + "' has no algebra basis");
  if (tensor.dim() != group.d) throw InvalidArgument("verify_invariance: dimension mismatch");
  const double norm = tensor.components().norm();
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const OrthogonalMatrix r = random_group_element(*group.algebra, seed + s);
    const Vector moved =
        apply_group_element(r.matrix(), tensor.components(), tensor.dim(), tensor.order());
    worst = std::max(worst, (moved - tensor.components()).norm() / norm);
  }
  return worst;
}

Matrix canonicalize_basis(const Matrix& basis) {
  const Eigen::Index n = basis.rows();
  const Eigen::Index r = basis.cols();
  if (r == 0) return Matrix(n, 0);

  // Reduced column echelon form with greedy pivots in coordinate order. The
  // result depends only on the span, not on the eigensolver's rotation.
  Matrix b = basis;
  const double tol = 1e-8 * b.cwiseAbs().maxCoeff();
  Eigen::Index placed = 0;
  for (Eigen::Index row = 0; row < n && placed < r; ++row) {
    Eigen::Index best = placed;
    for (Eigen::Index c = placed + 1; c < r; ++c)
      if (std::abs(b(row, c)) > std::abs(b(row, best))) best = c;
    if (std::abs(b(row, best)) <= tol) continue;
    b.col(best).swap(b.col(placed));
    b.col(placed) /= b(row, placed);
    for (Eigen::Index c = 0; c < r; ++c)
      if (c != placed) b.col(c) -= b(row, c) * b.col(placed);
    ++placed;
  }

  // Gram-Schmidt (twice for stability) in pivot order.
  for (Eigen::Index c = 0; c < r; ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index p = 0; p < c; ++p) b.col(c) -= b.col(p).dot(b.col(c)) * b.col(p);
    b.col(c).normalize();
  }

  for (Eigen::Index c = 0; c < r; ++c) {
    Eigen::Index arg = 0;
    const double peak = b.col(c).cwiseAbs().maxCoeff();
    while (std::abs(b(arg, c)) < peak - 1e-12 * peak) ++arg;
    if (b(arg, c) < 0.0) b.col(c) = -b.col(c);
  }
  return b;
}

}  // namespace gspin
