#pragma once

// Shooting for radial solutions of v'' + (N-1)/r v' + f(v) = 0 with
// v(0) = μ, v'(0) = 0; ground-state search over μ; the explicit
// Emden–Fowler family; the energy identity check.

#include <optional>
#include <string>
#include <vector>

#include "rdlab/nonlinearity.hpp"
#include "rdlab/radial_grid.hpp"

namespace rdlab {

enum class ShotLabel { CrossedZero, TurnedAround, ConvergedTo, BudgetExhausted };

std::string_view to_string(ShotLabel label);

struct ShotTolerances {
  double rel = 1e-10;
  double abs = 1e-12;
  /// Radius where the series start hands over to the integrator.
  double r_start = 1e-4;
  double max_step = 0.5;
  std::size_t max_steps = 2'000'000;
};

struct ShotSample {
  double r;
  double v;
  double w;  // v'
};

struct ShotOutcome {
  ShotLabel label = ShotLabel::BudgetExhausted;
  double mu = 0.0;
  /// Radius of the terminal event (r_max for ConvergedTo).
  double r_event = 0.0;
  /// v at the turning point for TurnedAround, the plateau estimate for
  /// ConvergedTo, 0 for CrossedZero.
  double value = 0.0;
  /// Accepted integration steps, starting at r = 0.
  std::vector<ShotSample> trajectory;

  /// v(r) by cubic Hermite interpolation of the trajectory, r within range.
  double v_at(double r) const;
  std::string describe() const;
};

/// Integrates from r = 0 to the first of: v = 0 (CrossedZero), v' > 0
/// with v > 0 (TurnedAround), r = r_max (ConvergedTo). For N ≥ 3 the
/// plateau estimate removes the harmonic tail, v + r·v'/(N-2); for N ≤ 2
/// it is v(r_max). Step collapse gives BudgetExhausted.
ShotOutcome shoot(const NonlinearitySpec& spec, int dim, double mu, double r_max,
                  const ShotTolerances& tol = {});

/// How a profile is continued beyond the last grid node.
enum class TailKind { None, Exponential, Algebraic };

struct TailModel {
  TailKind kind = TailKind::None;
  double r0 = 0.0;
  double v0 = 0.0;
  double rate = 0.0;  // k for Exponential, N-2 for Algebraic
  int dim = 1;

  double dim_exponent() const { return dim - 1.0; }

  double v(double r) const;
  double dv(double r) const;
};

struct GroundStateCandidate {
  double mu = 0.0;
  RadialField profile;
  TailModel tail;
  /// Integrals over ℝᴺ including the tail beyond the grid.
  double energy = 0.0;
  double grad_sq_integral = 0.0;
  bool decay_ok = false;
};

/// Builds a candidate from sampled values: picks the tail model from
/// f'(0) and N, adds the tail integrals and checks v > 0, v' ≤ 0 and
/// integrability.
GroundStateCandidate candidate_from_profile(const NonlinearitySpec& spec, RadialField profile,
                                            double mu);

struct GroundStateOptions {
  double refine_tol = 1e-10;
  double r_max = 200.0;
  /// Grid used for candidate profiles.
  double profile_r_max = 40.0;
  std::size_t profile_nodes = 4001;
  /// A ConvergedTo shot counts as a direct hit when |v_∞| ≤ hit_tol·μ.
  double hit_tol = 1e-3;
  ShotTolerances shot;
  int workers = 1;
};

struct UpsilonReport {
  std::vector<GroundStateCandidate> candidates;
  /// Set when a run of consecutive grid points hits directly; Υ is then
  /// reported as the interval [interval_lo, interval_hi] and (TD) fails.
  bool continuum = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::vector<ShotLabel> grid_labels;
};

/// Scans mu_grid (increasing, spacing ≤ 1e-3 recommended) for CrossedZero /
/// TurnedAround transitions and direct ConvergedTo(0) hits.
UpsilonReport find_ground_states(const NonlinearitySpec& spec, int dim,
                                 const std::vector<double>& mu_grid,
                                 const GroundStateOptions& opts = {});

/// Uniform grid of n points strictly inside (0, 1).
std::vector<double> uniform_mu_grid(std::size_t n);

/// (λ + r²/(λN(N-2)))^{-(N-2)/2} on the grid. Needs N ≥ 3, λ > 0.
RadialField emden_fowler_profile(const RadialGrid& grid, double lambda);
double emden_fowler_value(int dim, double lambda, double r);

struct PohozaevResult {
  double lhs = 0.0;  // E[v]
  double rhs = 0.0;  // (1/N)∫|∇v|²
  double rel_err = 0.0;
};

/// Compares E[v] with (1/N)∫|∇v|². Rejects candidates that do not decay.
PohozaevResult pohozaev_check(const GroundStateCandidate& candidate, const NonlinearitySpec& spec);

/// Newton iteration on the discrete equation Δ_h v + f(v) = 0 (Dirichlet
/// outer node), started from `guess`. Stops when the residual drops below
/// tol or the update stalls at round-off. Throws NumericalAbort without
/// convergence.
RadialField polish_stationary(const NonlinearitySpec& spec, const RadialField& guess,
                              double tol = 1e-13, int max_iter = 50);

}  // namespace rdlab
