#pragma once

// Monotone families of initial data, outcome classification by energy and
// sup-norm certificates, threshold bisection and the instability probe
// around a ground state.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdlab/nonlinearity.hpp"
#include "rdlab/pde_solver.hpp"
#include "rdlab/radial_grid.hpp"
#include "rdlab/stationary.hpp"

namespace rdlab {

/// (1-ε) on [0, R], linear ramp to 0 on [R, R+1], 0 beyond.
/// Throws ConfigError "ramp exceeds domain" when R + 1 > R_max.
RadialField make_plateau(double eps, double R, const RadialGrid& grid);

/// Quartic bump (1 - (r/R_b)²)² on [0, R_b].
RadialField make_bump(double radius, const RadialGrid& grid);

enum class FamilyKind { ScaledProfile, Plateau, Ramp };

std::string_view to_string(FamilyKind kind);

/// λ ↦ φ_λ with φ_0 = 0.
///   Plateau(ε, R_unit):  (1-ε)·clamp(λR_unit - r, 0, 1)
///   Ramp(R):             λ·clamp(R + 1 - r, 0, 1)
///   ScaledProfile(φ):    λ·φ
class InitialFamily {
 public:
  static InitialFamily plateau(double eps, double r_unit, double lambda_plus);
  static InitialFamily ramp(double radius, double lambda_plus);
  static InitialFamily scaled(RadialField profile, double lambda_plus);

  FamilyKind kind() const { return kind_; }
  double lambda_plus() const { return lambda_plus_; }
  const std::vector<double>& params() const { return params_; }
  RadialField at(double lambda, const RadialGrid& grid) const;
  std::string label() const;

 private:
  InitialFamily(FamilyKind kind, std::vector<double> params, double lambda_plus);

  FamilyKind kind_;
  std::vector<double> params_;
  double lambda_plus_;
  std::optional<RadialField> profile_;
};

struct FamilyCheck {
  std::vector<std::string> violations;
  double energy_plus = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Samples continuity (P1), monotonicity (P2), φ_0 = 0 and E[φ_{λ⁺}] < 0
/// (P3), plus non-negativity and SD of each sampled member.
FamilyCheck validate_family(const NonlinearitySpec& spec, const InitialFamily& family,
                            const RadialGrid& grid, int samples = 8);

enum class Outcome { Ignition, Extinction, GroundStateConvergence, Undecided };

std::string_view to_string(Outcome outcome);

struct Evidence {
  /// Time the certificate fired (or the end of the run).
  double t_cert = 0.0;
  double energy = 0.0;
  double sup = 0.0;
  double center_final = 0.0;
  std::optional<double> matched_mu;
  /// Sample with the smallest ∫u_t² (t > 0): where the run lingered.
  double dwell_t = 0.0;
  double dwell_center = 0.0;
  double dwell_energy = 0.0;
  double dwell_rate = 0.0;
  std::string reason;
};

struct OutcomeLabel {
  Outcome outcome = Outcome::Undecided;
  Evidence evidence;
};

struct ClassifyConfig {
  RadialGrid grid;
  double dt = 0.01;
  double t_max = 400.0;
  int sample_every = 10;
  /// Ignition margin; default 1e-4·|V(1)|·|B_{r_ref}|.
  std::optional<double> eps_energy{};
  double r_ref = 1.0;
  double eps_theta = 1e-3;
  double u_small = 1e-3;
  double mono_window = 50.0;
  /// Max |u_t| for a stationary end state.
  double stationary_tol = 1e-6;
  double match_tol = 1e-2;
  /// Ground-state candidates for GroundStateConvergence matching.
  std::vector<GroundStateCandidate> candidates{};
};

double ignition_margin(const NonlinearitySpec& spec, const ClassifyConfig& cfg);

/// `trace`, when given, receives the run's traces.
OutcomeLabel classify(const NonlinearitySpec& spec, const RadialField& phi,
                      const ClassifyConfig& cfg, RunResult* trace = nullptr);

struct LambdaOutcome {
  double lambda;
  OutcomeLabel label;
};

struct ThresholdDiagnostics {
  /// λ of the longest-lived run at the final bracket edges.
  double source_lambda = 0.0;
  double mu_star_estimate = 0.0;
  double center_at_end = 0.0;
  double E_limit_estimate = 0.0;
  /// E[v_*] of the matched ground-state candidate, when one is supplied.
  std::optional<double> E0_lower_bound;
  std::optional<double> matched_mu;
};

struct ThresholdReport {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  std::vector<LambdaOutcome> log;
  ThresholdDiagnostics diagnostics;
  bool stopped_undecided = false;
};

/// Called once per classified λ, possibly from several threads at once.
using RunSink = std::function<void(double lambda, const OutcomeLabel&, const RunResult&)>;

/// Bisects (k-sections with `workers` points per round) between λ = 0 and
/// λ⁺ until the bracket is below tol_lambda or a round produces a label
/// that is neither Extinction nor Ignition. A label sequence that is not
/// Extinction* (other)* Ignition* along λ raises NumericalAbort.
ThresholdReport bisect_threshold(const NonlinearitySpec& spec, const InitialFamily& family,
                                 double tol_lambda, const ClassifyConfig& cfg, int workers = 1,
                                 const RunSink& sink = {});

struct ProbeConfig {
  RadialGrid grid;
  double dt = 0.01;
  double t_max = 200.0;
  /// Horizon of the unperturbed (ε = 0) check.
  double t_stationary = 50.0;
  double bump_radius = 3.0;
  int sample_every = 10;
};

struct ProbeRun {
  double eps = 0.0;
  std::optional<double> ignition_time;
  std::optional<double> extinction_time;
  /// sup_t sup_r |u - v|, over the run.
  double max_deviation = 0.0;
  bool monotone_departure = false;
  bool inconclusive = false;
};

struct ProbeReport {
  /// Ground state on the probe grid after Newton polishing.
  RadialField ground_state;
  std::vector<ProbeRun> runs;
};

/// Runs from v + εψ for each ε. Positive ε should reach the ignition
/// certificate, negative ε the extinction certificate, ε = 0 should stay
/// put; a run with no certificate by t_max is flagged inconclusive.
ProbeReport instability_probe(const NonlinearitySpec& spec, const GroundStateCandidate& candidate,
                              const std::vector<double>& eps_list, const ProbeConfig& cfg);

}  // namespace rdlab
