#pragma once

// Time integration of u_t = Δu + f(u) for radial data: implicit diffusion,
// explicit reaction, plus energy, front and sup-norm trackers.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdlab/functionals.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/radial_grid.hpp"
#include "rdlab/tridiagonal.hpp"

namespace rdlab {

/// Largest admissible step, 0.5 / max|f'| on [0, max(sup_phi, 1)].
double dt_max(const NonlinearitySpec& spec, double sup_phi);

/// One IMEX step: u* = u + dt·f(u), then (I - dt·Δ_h)u_new = u*.
/// The Dirichlet outer node stays at 0.
class ImexStepper {
 public:
  ImexStepper(NonlinearitySpec spec, RadialGrid grid, double dt);

  double dt() const { return dt_; }
  const RadialGrid& grid() const { return grid_; }
  void step(std::span<double> u) const;
  RadialField step(const RadialField& field) const;

 private:
  NonlinearitySpec spec_;
  RadialGrid grid_;
  double dt_;
  TridiagonalLU lu_;
};

struct Trackers {
  bool energy = true;
  std::vector<double> front_deltas{0.5};
  bool sup_norm = true;
  bool center_value = true;
};

struct RunConfig {
  NonlinearitySpec spec;
  RadialGrid grid;
  double dt = 0.01;
  double t_end = 1.0;
  /// Steps between stored snapshots, starting at t = 0; 0 stores only the
  /// final field.
  int snapshot_every = 0;
  /// Steps between tracker samples.
  int sample_every = 10;
  Trackers trackers{};
  /// Abort once R_{guard_delta}(t) exceeds guard_fraction·R_max.
  bool boundary_guard = true;
  double guard_delta = 0.01;
  double guard_fraction = 0.9;
};

/// R_δ(t) per δ on the sampled times; radii[k] belongs to deltas[k].
struct FrontTrace {
  std::vector<double> deltas;
  std::vector<double> times;
  std::vector<std::vector<double>> radii;
};

struct SpeedFit {
  double speed = 0.0;
  double std_error = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t samples = 0;
};

struct Snapshot {
  double t;
  RadialField field;
};

/// What the observer sees at each tracker sample.
struct SampleView {
  double t;
  const RadialField& u;
  double energy;
  double dissipation;
  double sup;
};

/// Return false to stop the run early.
using Observer = std::function<bool(const SampleView&)>;

struct RunResult {
  double dt_max = 0.0;
  double t_final = 0.0;
  std::size_t steps = 0;
  EnergyTrace energy;
  FrontTrace fronts;
  std::vector<double> sample_times;
  std::vector<double> sup_norm;
  std::vector<double> center;
  std::vector<Snapshot> snapshots;
  std::optional<RadialField> final_field;
  std::optional<std::string> abort_reason;
  bool stopped_by_observer = false;

  bool aborted() const { return abort_reason.has_value(); }
};

/// Integrates from φ to cfg.t_end. φ must be non-negative and
/// non-increasing in r; dt above dt_max is a ConfigError. NaN and boundary
/// contamination end the run with abort_reason set.
RunResult run(const RadialField& phi, const RunConfig& cfg, const Observer& observer = {});

/// sup{r : u(r) > δ}, linearly interpolated to the crossing; 0 if u ≤ δ.
double front_radius(const RadialField& field, double delta);

/// Least-squares slope of R(t) over t ∈ [t_lo, t_hi]. Needs at least 10
/// samples in the window.
SpeedFit estimate_speed(std::span<const double> times, std::span<const double> radii, double t_lo,
                        double t_hi);
SpeedFit estimate_speed(const FrontTrace& trace, std::size_t delta_index, double t_lo, double t_hi);

/// ω_{N-1}·Σ cell_volume·u_t² with u_t = (u_new - u_old)/dt.
double dissipation_rate(const RadialGrid& grid, std::span<const double> u_old,
                        std::span<const double> u_new, double dt);

}  // namespace rdlab
