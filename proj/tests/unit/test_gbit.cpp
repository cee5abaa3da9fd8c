#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gspin/errors.hpp"
#include "gspin/gbit.hpp"
#include "oracles.hpp"

using namespace gspin;

TEST(Gbit, RejectsVectorsOutsideTheBall) {
  EXPECT_THROW(BlochVector(Vector::Constant(3, 1.0)), InvalidArgument);
  EXPECT_THROW(BlochVector(Vector::Zero(1)), InvalidArgument);
  EXPECT_NO_THROW(BlochVector(Vector::Constant(4, 0.5)));
  EXPECT_TRUE(BlochVector(Vector::Constant(4, 0.5)).is_pure());
}

TEST(Gbit, NegationKeepsSlack) {
  Vector v = Vector::Zero(3);
  v[0] = 1.0 + 1e-8;
  const BlochVector x(v, 1e-6);
  EXPECT_NO_THROW(-x);
  EXPECT_DOUBLE_EQ((-x)[0], -v[0]);
}

TEST(Gbit, BornProbabilityOfAxes) {
  const BlochVector e1 = BlochVector::axis(5, 0);
  EXPECT_DOUBLE_EQ(born_probability(e1, e1), 1.0);
  EXPECT_DOUBLE_EQ(born_probability(e1, -e1), 0.0);
  EXPECT_DOUBLE_EQ(born_probability(e1, BlochVector::axis(5, 3)), 0.5);
  EXPECT_DOUBLE_EQ(born_probability(BlochVector::zero(5), e1), 0.5);
}

TEST(Gbit, BornRejectsNonUnitDirectionAndMismatch) {
  EXPECT_THROW(born_probability(BlochVector::axis(3, 0), BlochVector::zero(3)), InvalidArgument);
  EXPECT_THROW(born_probability(BlochVector::axis(3, 0), BlochVector::axis(4, 0)), InvalidArgument);
}

TEST(Gbit, CompositeProbabilityMarginalizesToBorn) {
  oracle::Lcg rng{7};
  for (int trial = 0; trial < 100; ++trial) {
    const BlochVector x(0.9 * rng.unit(4));
    const BlochVector y(0.7 * rng.unit(4));
    const CompositeState psi = product_state(x, y);
    const BlochVector a(rng.unit(4));
    const BlochVector b(rng.unit(4));
    const double p = composite_probability(psi, a, b);
    EXPECT_NEAR(p, born_probability(x, a) * born_probability(y, b), 1e-14);
    EXPECT_NEAR(p + composite_probability(psi, a, -b), born_probability(x, a), 1e-14);
  }
}

TEST(Gbit, CompositeStateShapeChecked) {
  EXPECT_THROW(CompositeState(BlochVector::axis(3, 0), BlochVector::axis(3, 0), Matrix::Zero(2, 2)),
               InvalidArgument);
}

TEST(Gbit, CoherentOverlap) {
  const BlochVector e1 = BlochVector::axis(3, 0);
  const BlochVector e2 = BlochVector::axis(3, 1);
  EXPECT_EQ(coherent_overlap(e1, e2, 10), std::ldexp(1.0, -10));
  EXPECT_EQ(coherent_overlap(e1, e1, 1000), 1.0);
  EXPECT_EQ(coherent_overlap(e1, -e1, 3), 0.0);
  EXPECT_THROW(coherent_overlap(e1, e2, 0), InvalidArgument);
}

TEST(Gbit, CoherentPmfMatchesBinomialOracle) {
  const double theta = 1.1;
  const int n = 12;
  const CoherentStatistics s = coherent_outcome_distribution(theta, n);
  ASSERT_EQ(s.pmf.size(), 13u);
  const double c2 = std::pow(std::cos(theta / 2), 2);
  double total = 0.0, mean = 0.0, var = 0.0;
  double binom = 1.0;  // C(n, j) built incrementally
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    const double p = binom * std::pow(c2, j) * std::pow(1 - c2, n - j);
    EXPECT_NEAR(s.pmf[j].probability, p, 1e-14);
    EXPECT_DOUBLE_EQ(s.pmf[j].m, j - n / 2.0);
    total += s.pmf[j].probability;
    mean += s.pmf[j].m * s.pmf[j].probability;
  }
  for (const Outcome& o : s.pmf) var += (o.m - mean) * (o.m - mean) * o.probability;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NEAR(s.mean, mean, 1e-12);
  EXPECT_NEAR(s.stddev, std::sqrt(var), 1e-12);
  EXPECT_NEAR(s.mean, n / 2.0 * std::cos(theta), 1e-13);
}

TEST(Gbit, CoherentPmfAtPolesAndLargeN) {
  const CoherentStatistics up = coherent_outcome_distribution(0.0, 5);
  EXPECT_EQ(up.pmf.back().probability, 1.0);
  EXPECT_EQ(up.stddev, 0.0);
  const CoherentStatistics big = coherent_outcome_distribution(std::numbers::pi / 2, 5000);
  double total = 0.0;
  for (const Outcome& o : big.pmf) total += o.probability;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(big.stddev, std::sqrt(5000.0) / 2, 1e-9);
}

TEST(Gbit, CoarseGrainPreservesMassAndRecomputesMoments) {
  const CoherentStatistics s = coherent_outcome_distribution(0.8, 9);
  const CoherentStatistics c = coarse_grain(s, 3);
  ASSERT_EQ(c.pmf.size(), 4u);  // 10 outcomes in slots of 3, 3, 3, 1
  double total = 0.0;
  for (const Outcome& o : c.pmf) total += o.probability;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(c.pmf[0].m, -3.5);  // centre of -4.5, -3.5, -2.5
  EXPECT_DOUBLE_EQ(c.pmf[3].m, 4.5);
  const CoherentStatistics same = coarse_grain(s, 1);
  EXPECT_NEAR(same.mean, s.mean, 1e-13);
  EXPECT_NEAR(same.stddev, s.stddev, 1e-13);
  EXPECT_THROW(coarse_grain(s, 0), InvalidArgument);
}

TEST(Gbit, CoherentSpecValidation) {
  EXPECT_THROW(CoherentSpec(BlochVector::axis(3, 0), 2, 0.0, {1.0}), InvalidArgument);
  const CoherentSpec spec(BlochVector::axis(3, 0), 2, 0.0, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(spec.mean_coupling(), 2.0);
}
