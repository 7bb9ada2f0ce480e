#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/functionals.hpp"
#include "rdlab/traveling_wave.hpp"

using namespace rdlab;

TEST(Wave, NagumoQuarter) {
  const auto spec = NonlinearitySpec::nagumo(0.25);
  const WaveResult w = compute_wave(spec);
  EXPECT_NEAR(w.c_dagger, oracles::nagumo_speed(0.25), 1e-8);
  EXPECT_LE(w.c_lo, w.c_dagger);
  EXPECT_GE(w.c_hi, w.c_dagger);
  double worst = 0.0;
  for (std::size_t j = 0; j < w.profile.size(); ++j) {
    worst = std::max(worst, std::abs(w.profile.values[j] - oracles::nagumo_profile(w.profile.z(j))));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_LT(w.ode_residual, 1e-6);
  EXPECT_LT(w.phi_residual, 1e-3);
  EXPECT_NEAR(w.profile.at(0.0), 0.5, 1e-9);
}

TEST(Wave, NagumoTenth) {
  const WaveResult w = compute_wave(NonlinearitySpec::nagumo(0.1));
  EXPECT_NEAR(w.c_dagger, 0.5656854, 1e-4);
}

TEST(Wave, IgnitionBump) {
  const auto spec = NonlinearitySpec::ignition_bump(0.3);
  const WaveResult w = compute_wave(spec);
  EXPECT_GT(w.c_dagger, 0.0);
  EXPECT_LT(w.phi_residual, 1e-3);
  EXPECT_LT(w.ode_residual, 1e-6);
}

TEST(Wave, ProfileShape) {
  for (const auto& spec : {NonlinearitySpec::nagumo(0.25), NonlinearitySpec::ignition_bump(0.3),
                           NonlinearitySpec::power_diff(2.0, 4.0),
                           NonlinearitySpec::triple_power(2.0, 3.0, 4.0, 2.0)}) {
    const WaveResult w = compute_wave(spec);
    const auto& v = w.profile.values;
    EXPECT_GT(w.c_dagger, 0.0) << spec.label();
    for (std::size_t j = 0; j < v.size(); ++j) {
      EXPECT_GT(v[j], 0.0) << spec.label();
      EXPECT_LE(v[j], 1.0) << spec.label();
      if (j > 0) EXPECT_LE(v[j], v[j - 1]) << spec.label() << " j=" << j;
    }
    EXPECT_GT(v.front(), 0.999) << spec.label();
    EXPECT_LT(v.back(), 1e-3) << spec.label();
    EXPECT_LT(w.ode_residual, 1e-6) << spec.label();
  }
}

TEST(Wave, WeightedCertificateAroundSpeed) {
  const auto spec = NonlinearitySpec::nagumo(0.25);
  const WaveResult w = compute_wave(spec);
  EXPECT_GE(weighted_energy(w.profile, spec, 1.2 * w.c_dagger).value(), 0.0);
  // Below c†, a long enough plateau of the profile turns Φ_c negative.
  LineField shifted = w.profile;
  shifted.z_start += 40.0;
  const std::vector<double> cs{0.8 * w.c_dagger};
  EXPECT_TRUE(is_wavelike(shifted, spec, cs).has_value());
}

TEST(Wave, Hypotheses) {
  try {
    compute_wave(NonlinearitySpec::power_diff(1.0, 2.0));
    FAIL() << "KPP nonlinearity accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("hypothesis"), std::string::npos);
  }
  EXPECT_THROW(compute_wave(NonlinearitySpec::pure_power(3.0)), ConfigError);
  EXPECT_THROW(compute_wave(NonlinearitySpec::nagumo(0.6)), StructuralError);
}

TEST(Wave, ResidualOfExactProfile) {
  LineField u{-30.0, 0.01, {}};
  for (int j = 0; j <= 6000; ++j) u.values.push_back(oracles::nagumo_profile(u.z(j)));
  EXPECT_LT(wave_residual(u, NonlinearitySpec::nagumo(0.25), oracles::nagumo_speed(0.25)), 1e-8);
  EXPECT_GT(wave_residual(u, NonlinearitySpec::nagumo(0.25), 0.3), 1e-3);
}
