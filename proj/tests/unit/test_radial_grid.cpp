#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/radial_grid.hpp"

using namespace rdlab;
using std::numbers::pi;

TEST(RadialGrid, Construction) {
  const RadialGrid g(3, 10.0, 101);
  EXPECT_DOUBLE_EQ(g.h(), 0.1);
  EXPECT_DOUBLE_EQ(g.r(100), 10.0);
  EXPECT_THROW(RadialGrid(3, 10.0, 15), ConfigError);
  EXPECT_THROW(RadialGrid(0, 10.0, 101), ConfigError);
  EXPECT_THROW(RadialGrid(2, -1.0, 101), ConfigError);
}

TEST(RadialGrid, CellVolumesPartitionTheBall) {
  for (int n : {1, 2, 3, 5}) {
    const RadialGrid g(n, 7.0, 97);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += g.cell_volume(i);
    EXPECT_NEAR(sum * unit_sphere_area(n), oracles::ball_volume(n, 7.0), 1e-9 * sum) << n;
  }
}

TEST(RadialGrid, SphereArea) {
  EXPECT_DOUBLE_EQ(unit_sphere_area(1), 2.0);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * pi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * pi / 3.0, 1e-14);
}

TEST(Laplacian, ConstantIsHarmonic) {
  const RadialGrid g(3, 5.0, 65, OuterBC::Neumann0);
  const auto lap = laplacian(RadialField(g, std::vector<double>(g.size(), 0.7)));
  for (double x : lap.values) EXPECT_NEAR(x, 0.0, 1e-13);
}

TEST(Laplacian, QuadraticInThreeDimensions) {
  const RadialGrid g(3, 2.0, 201);
  const auto lap = laplacian(RadialField::from_function(g, [](double r) { return r * r; }));
  for (std::size_t i = 1; i + 1 < g.size(); ++i) EXPECT_NEAR(lap[i], 6.0, 1e-3) << i;
}

TEST(Laplacian, GaussianAtOrigin) {
  const RadialGrid g(3, 6.0, 1201);
  const auto lap = laplacian(RadialField::from_function(g, [](double r) { return std::exp(-r * r); }));
  EXPECT_NEAR(lap[0], -6.0, 1e-3);
}

TEST(Laplacian, SecondOrderConvergence) {
  auto exact = [](int n, double r) { return (4.0 * r * r - 2.0 * n) * std::exp(-r * r); };
  for (int n : {1, 2, 3}) {
    std::vector<double> errs;
    for (std::size_t m : {129u, 257u, 513u}) {
      const RadialGrid g(n, 6.0, m);
      const auto lap =
          laplacian(RadialField::from_function(g, [](double r) { return std::exp(-r * r); }));
      double err = 0.0;
      for (std::size_t i = 0; i + 1 < m; ++i) err = std::max(err, std::abs(lap[i] - exact(n, g.r(i))));
      errs.push_back(err);
    }
    EXPECT_GT(errs[0] / errs[1], 3.5) << n;
    EXPECT_GT(errs[1] / errs[2], 3.5) << n;
  }
}

TEST(Integrate, BallAndDisc) {
  EXPECT_NEAR(integrate(RadialGrid(3, 1.0, 4097), [](double) { return 1.0; }), 4.0 * pi / 3.0, 1e-6);
  EXPECT_NEAR(integrate(RadialGrid(2, 2.0, 4097), [](double) { return 1.0; }), 4.0 * pi, 1e-6);
  EXPECT_NEAR(integrate(RadialGrid(3, 1.0, 4097), [](double r) { return r * r; }), 4.0 * pi / 5.0,
              1e-6);
}

TEST(Integrate, SecondOrder) {
  auto err = [](std::size_t m) {
    return std::abs(integrate(RadialGrid(3, 1.0, m), [](double r) { return r * r; }) - 4.0 * pi / 5.0);
  };
  EXPECT_GT(err(65) / err(129), 3.5);
}

TEST(WeightedKernel, ValuesAtZero) {
  EXPECT_NEAR(weighted_kernel(2, 0.7, 0.0), pi, 1e-12);
  EXPECT_NEAR(weighted_kernel(3, 0.7, 0.0), 2.0, 1e-12);
  EXPECT_NEAR(weighted_kernel(3, 1.0, 1.0), 2.0 * std::sinh(1.0), 1e-10);
  EXPECT_NEAR(weighted_kernel(3, 1.0, 1.0), 2.3504, 1e-4);
}

TEST(WeightedKernel, MatchesThreeDimensionalClosedForm) {
  for (double s = 0.0; s <= 50.0; s += 0.25) {
    const double exact = oracles::kernel_3d(s);
    EXPECT_NEAR(weighted_kernel(3, 1.0, s), exact, 1e-8 * std::max(1.0, exact)) << s;
    EXPECT_NEAR(weighted_kernel_scaled(3, s), std::exp(-s) * exact, 1e-12) << s;
  }
}

TEST(WeightedKernel, RejectsLineCase) {
  EXPECT_THROW(weighted_kernel(1, 1.0, 1.0), DomainError);
  EXPECT_THROW(weighted_kernel(3, 1.0, -1.0), DomainError);
}

TEST(RadialField, Interpolation) {
  const RadialGrid g(1, 10.0, 21);
  const auto u = RadialField::from_function(g, [](double r) { return 10.0 - r; });
  EXPECT_DOUBLE_EQ(u.at(2.5), 7.5);
  EXPECT_EQ(u.at(11.0), 0.0);
  EXPECT_TRUE(u.is_symmetric_decreasing());
  EXPECT_DOUBLE_EQ(u.sup(), 10.0);
}
