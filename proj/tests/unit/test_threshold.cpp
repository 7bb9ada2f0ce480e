#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "oracles.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/functionals.hpp"
#include "rdlab/threshold.hpp"

using namespace rdlab;

namespace {

const NonlinearitySpec kNagumo = NonlinearitySpec::nagumo(0.25);

int phase(Outcome o) { return o == Outcome::Extinction ? 0 : o == Outcome::Ignition ? 2 : 1; }

void expect_monotone(std::vector<LambdaOutcome> log) {
  std::sort(log.begin(), log.end(), [](auto& a, auto& b) { return a.lambda < b.lambda; });
  for (std::size_t k = 1; k < log.size(); ++k) {
    EXPECT_LE(phase(log[k - 1].label.outcome), phase(log[k].label.outcome))
        << "lambda " << log[k - 1].lambda << " vs " << log[k].lambda;
  }
}

}  // namespace

TEST(Plateau, Values) {
  const RadialGrid g(2, 100.0, 2001);
  const auto phi = make_plateau(0.1, 40.0, g);
  EXPECT_DOUBLE_EQ(phi[0], 0.9);
  EXPECT_NEAR(phi.at(40.5), 0.45, 1e-12);
  EXPECT_EQ(phi.at(45.0), 0.0);
  try {
    make_plateau(0.1, 99.5, g);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("ramp exceeds domain"), std::string::npos);
  }
}

TEST(Family, PlateauChecks) {
  const RadialGrid g(1, 200.0, 2049);
  const auto fam = InitialFamily::plateau(0.1, 1.0, 12.0);
  const auto chk = validate_family(kNagumo, fam, g);
  EXPECT_TRUE(chk.ok()) << (chk.violations.empty() ? "" : chk.violations.front());
  EXPECT_LT(chk.energy_plus, 0.0);
  for (double x : fam.at(0.0, g).values) EXPECT_EQ(x, 0.0);
}

TEST(Family, ViolatedP3) {
  const RadialGrid g(1, 200.0, 2049);
  const auto chk = validate_family(kNagumo, InitialFamily::plateau(0.1, 1.0, 1.0), g);
  ASSERT_FALSE(chk.ok());
  bool found = false;
  for (const auto& v : chk.violations) found |= v.find("(P3) violated") != std::string::npos;
  EXPECT_TRUE(found);
  ClassifyConfig cfg{.grid = g};
  EXPECT_THROW(bisect_threshold(kNagumo, InitialFamily::plateau(0.1, 1.0, 1.0), 1e-2, cfg), ConfigError);
}

TEST(Family, RampAndScaled) {
  const RadialGrid g(1, 50.0, 1025);
  const auto ramp = InitialFamily::ramp(5.0, 2.0);
  EXPECT_NEAR(ramp.at(0.5, g).at(3.0), 0.5, 1e-12);
  EXPECT_NEAR(ramp.at(0.5, g).at(5.5), 0.25, 1e-12);
  const auto bump = make_bump(3.0, g);
  const auto scaled = InitialFamily::scaled(bump, 1.0);
  EXPECT_NEAR(scaled.at(0.5, g)[0], 0.5, 1e-12);
  EXPECT_EQ(scaled.kind(), FamilyKind::ScaledProfile);
}

TEST(Classify, Examples) {
  const RadialGrid g(2, 200.0, 2049);
  ClassifyConfig cfg{.grid = g};
  cfg.t_max = 100.0;
  EXPECT_EQ(classify(kNagumo, RadialField(g), cfg).outcome, Outcome::Extinction);

  const auto ign = classify(kNagumo, make_plateau(0.1, 40.0, g), cfg);
  EXPECT_EQ(ign.outcome, Outcome::Ignition);
  EXPECT_LT(ign.evidence.energy, -ignition_margin(kNagumo, cfg));

  const auto low = RadialField::from_function(g, [](double r) { return 0.2 * std::clamp(11.0 - r, 0.0, 1.0); });
  const auto ext = classify(kNagumo, low, cfg);
  EXPECT_EQ(ext.outcome, Outcome::Extinction);
  EXPECT_LT(ext.evidence.sup, 0.25);
}

TEST(Classify, IgnitionSurvivesRefinement) {
  for (std::size_t m : {1025u, 2049u}) {
    ClassifyConfig cfg{.grid = RadialGrid(1, 100.0, m)};
    cfg.t_max = 100.0;
    cfg.dt = m == 1025u ? 0.01 : 0.005;
    EXPECT_EQ(classify(kNagumo, make_plateau(0.1, 3.0, cfg.grid), cfg).outcome, Outcome::Ignition) << m;
  }
}

TEST(Classify, ExtinctionEnergyVanishes) {
  ClassifyConfig cfg{.grid = RadialGrid(1, 100.0, 1025)};
  cfg.t_max = 200.0;
  RunResult trace;
  const auto l = classify(kNagumo, make_plateau(0.1, 0.2, cfg.grid), cfg, &trace);
  ASSERT_EQ(l.outcome, Outcome::Extinction);
  // Continue the run past the certificate: E decays to 0.
  RunConfig rc{.spec = kNagumo, .grid = cfg.grid};
  rc.t_end = 100.0;
  const auto res = run(*trace.final_field, rc);
  EXPECT_LT(std::abs(res.energy.energies.back()), 1e-3);
}

TEST(Classify, UndecidedAtHorizon) {
  ClassifyConfig cfg{.grid = RadialGrid(1, 100.0, 1025)};
  cfg.t_max = 0.5;
  const auto l = classify(kNagumo, make_plateau(0.1, 0.8, cfg.grid), cfg);
  EXPECT_EQ(l.outcome, Outcome::Undecided);
  EXPECT_FALSE(l.evidence.reason.empty());
}

TEST(Bisect, NagumoCoarse) {
  ClassifyConfig cfg{.grid = RadialGrid(1, 100.0, 1025)};
  cfg.t_max = 200.0;
  const auto rep = bisect_threshold(kNagumo, InitialFamily::plateau(0.1, 1.0, 12.0), 2e-2, cfg, 4);
  EXPECT_LE(rep.lambda_hi - rep.lambda_lo, 2e-2);
  EXPECT_GT(rep.lambda_lo, 0.0);
  expect_monotone(rep.log);
  for (const auto& e : rep.log) {
    if (e.lambda <= rep.lambda_lo) EXPECT_EQ(e.label.outcome, Outcome::Extinction);
    if (e.lambda >= rep.lambda_hi) EXPECT_EQ(e.label.outcome, Outcome::Ignition);
  }
}

TEST(Bisect, IgnitionRampFamily) {
  ClassifyConfig cfg{.grid = RadialGrid(1, 100.0, 1025)};
  cfg.t_max = 200.0;
  const auto spec = NonlinearitySpec::ignition_bump(0.3);
  std::atomic<int> runs{0};
  const auto rep = bisect_threshold(spec, InitialFamily::ramp(5.0, 1.0), 1e-2, cfg, 4,
                                    [&](double, const OutcomeLabel&, const RunResult& r) {
                                      if (!r.sample_times.empty()) ++runs;
                                    });
  EXPECT_LE(rep.lambda_hi - rep.lambda_lo, 1e-2);
  EXPECT_GT(rep.lambda_lo, 0.3);
  expect_monotone(rep.log);
  // λ = 0 is labeled without a run.
  EXPECT_EQ(static_cast<std::size_t>(runs.load()) + 1, rep.log.size());
}

TEST(Bisect, MonostableSmallDataCanDie) {
  // u² - u⁴ in three dimensions: p = 2 lies above the Fujita exponent 5/3,
  // so small plateaus decay while large ones ignite.
  const auto spec = NonlinearitySpec::power_diff(2.0, 4.0);
  const auto rep_gs = find_ground_states(spec, 3, uniform_mu_grid(199));
  EXPECT_TRUE(rep_gs.candidates.empty());
  EXPECT_FALSE(rep_gs.continuum);

  ClassifyConfig cfg{.grid = RadialGrid(3, 120.0, 1201)};
  cfg.t_max = 200.0;
  const auto fam = InitialFamily::plateau(0.1, 1.0, 8.0);
  std::vector<LambdaOutcome> log;
  for (double lam : {0.6, 1.2, 2.4, 8.0}) log.push_back({lam, classify(spec, fam.at(lam, cfg.grid), cfg)});
  expect_monotone(log);
  EXPECT_EQ(log.front().label.outcome, Outcome::Extinction);
  EXPECT_EQ(log.back().label.outcome, Outcome::Ignition);
}

TEST(Probe, NagumoLine) {
  const auto gs = find_ground_states(kNagumo, 1, uniform_mu_grid(199));
  ASSERT_EQ(gs.candidates.size(), 1u);
  ProbeConfig cfg{.grid = RadialGrid(1, 80.0, 4001)};
  cfg.t_max = 100.0;
  const auto rep = instability_probe(kNagumo, gs.candidates[0], {0.01, -0.01, 0.0}, cfg);
  ASSERT_EQ(rep.runs.size(), 3u);
  EXPECT_TRUE(rep.runs[0].ignition_time.has_value());
  EXPECT_TRUE(rep.runs[1].extinction_time.has_value());
  EXPECT_LT(rep.runs[2].max_deviation, 1e-6);
}
