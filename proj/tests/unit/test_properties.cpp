#include <gtest/gtest.h>

#include "properties.hpp"

TEST(Properties, ComparisonOrdering) {
  const auto c = props::comparison_ordering();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, SymmetricDecreasingPreserved) {
  const auto c = props::sd_preservation();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, EnergyNonIncreasing) {
  const auto c = props::energy_monotonicity();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, WeightedPoincare) {
  const auto c = props::poincare();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, Equilibria) {
  const auto c = props::equilibria();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, CriticalExponentTable) {
  const auto c = props::table_one();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, NoPlanarGroundStates) {
  const auto c = props::planar_emptiness();
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(Properties, PotentialDerivative) {
  std::mt19937_64 rng(props::kPropertySeed);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  for (const auto& spec : props::evolution_specs()) {
    for (int k = 0; k < 100; ++k) {
      const double u = unit(rng);
      const double h = 1e-5;
      const double dV = (spec.V(u + h) - spec.V(u - h)) / (2.0 * h);
      EXPECT_NEAR(dV + spec.f(u), 0.0, 1e-6) << spec.label() << " u=" << u;
    }
  }
}

TEST(Properties, StructuralLevelsOrdered) {
  for (const auto& spec : {rdlab::NonlinearitySpec::nagumo(0.25), rdlab::NonlinearitySpec::nagumo(0.1),
                           rdlab::NonlinearitySpec::triple_power(2.0, 3.0, 4.0, 2.0)}) {
    const double ts = rdlab::theta_star(spec);
    EXPECT_LT(spec.theta0(), ts) << spec.label();
    for (double c : {0.01, 0.05, 0.1, 0.2}) {
      const double tc = rdlab::theta_c(spec, c);
      EXPECT_LT(ts, tc) << spec.label() << " c=" << c;
      EXPECT_LT(tc, 1.0) << spec.label() << " c=" << c;
    }
  }
}
