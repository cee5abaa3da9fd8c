#include "gspin/gbit.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b)
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
}

void require_unit(const BlochVector& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > BlochVector::kPureTolerance)
    throw InvalidArgument(std::string(what) + ": measurement direction is not a unit vector");
}

}  // namespace

BlochVector::BlochVector(Vector components, double norm_slack)
    : components_(std::move(components)), norm_slack_(norm_slack) {
  if (components_.size() < 2) throw InvalidArgument("BlochVector: dimension must be at least 2");
  if (!components_.allFinite()) throw InvalidArgument("BlochVector: non-finite component");
  if (components_.norm() > 1.0 + norm_slack)
    throw InvalidArgument("BlochVector: norm exceeds 1 (" + std::to_string(components_.norm()) +
                          ")");
}

BlochVector BlochVector::axis(int dim, int index, double sign) {
  if (index < 0 || index >= dim) throw InvalidArgument("BlochVector::axis: index out of range");
  Vector v = Vector::Zero(dim);
  v[index] = sign;
  return BlochVector(std::move(v));
}

BlochVector BlochVector::zero(int dim) { return BlochVector(Vector::Zero(dim)); }

bool BlochVector::is_pure() const { return std::abs(norm() - 1.0) <= kPureTolerance; }

BlochVector BlochVector::operator-() const { return BlochVector(-components_, norm_slack_); }

CompositeState::CompositeState(BlochVector x, BlochVector y, Matrix correlations,
                               std::vector<GlobalParameter> globals)
    : x_(std::move(x)), y_(std::move(y)), t_(std::move(correlations)), globals_(std::move(globals)) {
  require_same_dim(x_.dim(), y_.dim(), "CompositeState");
  if (t_.rows() != x_.dim() || t_.cols() != x_.dim())
    throw InvalidArgument("CompositeState: correlation matrix must be d×d");
}

CoherentSpec::CoherentSpec(BlochVector direction_, int count_, double theta_,
                           std::vector<double> couplings_)
    : direction(std::move(direction_)), count(count_), theta(theta_), couplings(std::move(couplings_)) {
  if (std::abs(direction.norm() - 1.0) > 1e-12)
    throw InvalidArgument("CoherentSpec: direction must be a unit vector");
  if (count < 1) throw InvalidArgument("CoherentSpec: count must be at least 1");
  if (static_cast<int>(couplings.size()) != count)
    throw InvalidArgument("CoherentSpec: expected one coupling per constituent");
}

double CoherentSpec::mean_coupling() const {
  return std::accumulate(couplings.begin(), couplings.end(), 0.0) / count;
}

double born_probability(const BlochVector& x, const BlochVector& y) {
  require_same_dim(x.dim(), y.dim(), "born_probability");
  require_unit(y, "born_probability");
  return 0.5 * (1.0 + x.components().dot(y.components()));
}

double composite_probability(const CompositeState& psi, const BlochVector& a,
                             const BlochVector& b) {
  require_same_dim(psi.dim(), a.dim(), "composite_probability");
  require_same_dim(psi.dim(), b.dim(), "composite_probability");
  require_unit(a, "composite_probability");
  require_unit(b, "composite_probability");
  const Vector& av = a.components();
  const Vector& bv = b.components();
  return 0.25 * (1.0 + psi.x().components().dot(av) + psi.y().components().dot(bv) +
                 av.dot(psi.correlations() * bv));
}

CompositeState product_state(const BlochVector& x, const BlochVector& y) {
  require_same_dim(x.dim(), y.dim(), "product_state");
  Matrix t = x.components() * y.components().transpose();
  return CompositeState(x, y, std::move(t));
}

double coherent_overlap(const BlochVector& n1, const BlochVector& n2, int count) {
  require_same_dim(n1.dim(), n2.dim(), "coherent_overlap");
  require_unit(n1, "coherent_overlap");
  require_unit(n2, "coherent_overlap");
  if (count < 1) throw InvalidArgument("coherent_overlap: count must be at least 1");
  const double base = 0.5 * (1.0 + n1.components().dot(n2.components()));
  return std::pow(std::max(base, 0.0), count);
}

CoherentStatistics coherent_outcome_distribution(double theta, int count) {
  if (count < 1) throw InvalidArgument("coherent_outcome_distribution: count must be at least 1");
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double half = 0.5 * count;

  CoherentStatistics stats;
  stats.mean = half * std::cos(theta);
  stats.stddev = 0.5 * std::sqrt(static_cast<double>(count)) * std::abs(std::sin(theta));
  stats.pmf.resize(static_cast<std::size_t>(count) + 1);

  // j = N/2 + m counts the "up" outcomes; p_j = C(N, j) (c²)^j (s²)^(N-j).
  const double log_c2 = c == 0.0 ? -INFINITY : 2.0 * std::log(std::abs(c));
  const double log_s2 = s == 0.0 ? -INFINITY : 2.0 * std::log(std::abs(s));
  const double log_nf = std::lgamma(count + 1.0);
  double total = 0.0;
  for (int j = 0; j <= count; ++j) {
    double p;
    if ((j > 0 && c == 0.0) || (j < count && s == 0.0)) {
      p = 0.0;
    } else {
      double lp = log_nf - std::lgamma(j + 1.0) - std::lgamma(count - j + 1.0);
      if (j > 0) lp += j * log_c2;
      if (j < count) lp += (count - j) * log_s2;
      p = std::exp(lp);
    }
    stats.pmf[j] = {j - half, p};
    total += p;
  }
  // lgamma carries O(N eps) relative error in the common factor; remove it.
  for (auto& o : stats.pmf) o.probability /= total;
  return stats;
}

CoherentStatistics coarse_grain(const CoherentStatistics& stats, int slot_size) {
  if (slot_size < 1) throw InvalidArgument("coarse_grain: slot_size must be at least 1");
  CoherentStatistics out;
  const std::size_t n = stats.pmf.size();
  for (std::size_t start = 0; start < n; start += slot_size) {
    const std::size_t stop = std::min(n, start + static_cast<std::size_t>(slot_size));
    double p = 0.0;
    for (std::size_t i = start; i < stop; ++i) p += stats.pmf[i].probability;
    out.pmf.push_back({0.5 * (stats.pmf[start].m + stats.pmf[stop - 1].m), p});
  }
  double mean = 0.0;
  for (const auto& o : out.pmf) mean += o.m * o.probability;
  double var = 0.0;
  for (const auto& o : out.pmf) var += (o.m - mean) * (o.m - mean) * o.probability;
  out.mean = mean;
  out.stddev = std::sqrt(var);
  return out;
}

}  // namespace gspin
