#pragma once

// Kinematics of generalized spins: Bloch-ball states, the two-outcome
// probability rule for one and two spins, and spin-coherent-state statistics.

#include <string>
#include <vector>

#include "gspin/linalg.hpp"

namespace gspin {

/// A point in the d-dimensional Bloch ball (d >= 2). Mixed states are allowed;
/// construction rejects vectors longer than 1 + norm_slack.
class BlochVector {
 public:
  static constexpr double kNormSlack = 1e-12;
  static constexpr double kPureTolerance = 1e-9;

  explicit BlochVector(Vector components, double norm_slack = kNormSlack);

  /// sign * e_index, with 0-based index.
  static BlochVector axis(int dim, int index, double sign = 1.0);
  static BlochVector zero(int dim);

  int dim() const { return static_cast<int>(components_.size()); }
  const Vector& components() const { return components_; }
  double operator[](int i) const { return components_[i]; }
  double norm() const { return components_.norm(); }
  bool is_pure() const;

  BlochVector operator-() const;

 private:
  Vector components_;
  double norm_slack_;
};

struct GlobalParameter {
  std::string name;
  double value = 0.0;
};

/// State (x, y, T, Λ) of two generalized spins of equal dimension.
class CompositeState {
 public:
  CompositeState(BlochVector x, BlochVector y, Matrix correlations,
                 std::vector<GlobalParameter> globals = {});

  int dim() const { return x_.dim(); }
  const BlochVector& x() const { return x_; }
  const BlochVector& y() const { return y_; }
  const Matrix& correlations() const { return t_; }
  const std::vector<GlobalParameter>& globals() const { return globals_; }

 private:
  BlochVector x_;
  BlochVector y_;
  Matrix t_;
  std::vector<GlobalParameter> globals_;
};

/// N equally prepared spins along `direction` with per-constituent couplings.
struct CoherentSpec {
  CoherentSpec(BlochVector direction, int count, double theta, std::vector<double> couplings);

  BlochVector direction;
  int count;
  double theta;
  std::vector<double> couplings;

  double mean_coupling() const;
};

struct Outcome {
  double m = 0.0;            // J_z eigenvalue, or slot centre after coarse graining
  double probability = 0.0;
};

struct CoherentStatistics {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<Outcome> pmf;
};

/// ½(1 + xᵀy) for a unit measurement direction y.
double born_probability(const BlochVector& x, const BlochVector& y);

/// ¼(1 + xᵀa + yᵀb + aᵀTb). Negative values signal an unphysical state.
double composite_probability(const CompositeState& psi, const BlochVector& a,
                             const BlochVector& b);

/// (x, y, x yᵀ) with no global parameters.
CompositeState product_state(const BlochVector& x, const BlochVector& y);

/// ((1 + n1ᵀn2)/2)^N.
double coherent_overlap(const BlochVector& n1, const BlochVector& n2, int count);

/// J_z statistics of N spin-1/2 particles polarized at polar angle theta:
/// p_m = C(N, N/2+m) cos^(N+2m)(θ/2) sin^(N-2m)(θ/2), m = -N/2..N/2.
/// mean and stddev are the exact binomial moments (N/2)cosθ and (√N/2)|sinθ|.
CoherentStatistics coherent_outcome_distribution(double theta, int count);

/// Merge consecutive outcomes (from the lowest m up) into slots of slot_size;
/// a slot is labelled by the centre of the outcomes it covers.
CoherentStatistics coarse_grain(const CoherentStatistics& stats, int slot_size);

}  // namespace gspin
