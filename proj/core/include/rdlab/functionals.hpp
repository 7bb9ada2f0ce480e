#pragma once

// Energy E[u] = ∫ ½|∇u|² + V(u), the exponentially weighted functional
// Φ_c[u] = ∫ e^{c z}(½|∇u|² + V(u)) with z the first coordinate, and the
// wave-like certificate built on Φ_c.

#include <optional>
#include <span>
#include <vector>

#include "rdlab/nonlinearity.hpp"
#include "rdlab/radial_grid.hpp"

namespace rdlab {

/// Samples of a function of one variable on z_j = z_start + j·dz.
struct LineField {
  double z_start = 0.0;
  double dz = 1.0;
  std::vector<double> values;

  double z(std::size_t j) const { return z_start + static_cast<double>(j) * dz; }
  std::size_t size() const { return values.size(); }
  /// Linear interpolation; constant extension beyond either end.
  double at(double z) const;
};

/// ∫|∇u|² over ℝᴺ. The gradient lives on cell faces,
/// (u_{i+1} - u_i)/h at r_{i+1/2}, which is the form the diffusion
/// operator of radial_grid dissipates exactly.
double dirichlet_integral(const RadialField& field);

/// ∫V(u) over ℝᴺ with the control volumes of the grid. Values below zero
/// (round-off) use V(u) = -f'(0)u²/2.
double potential_integral(const RadialField& field, const NonlinearitySpec& spec);

double energy(const RadialField& field, const NonlinearitySpec& spec);

/// Φ_c stored as scaled·e^{log_offset} so large c·R does not overflow.
/// The sign of `scaled` is the sign of Φ_c.
struct WeightedValue {
  double scaled = 0.0;
  double log_offset = 0.0;

  double value() const;
  bool negative() const { return scaled < 0.0; }
};

/// Φ_c for a radial field. N ≥ 2 uses the spherical reduction with
/// weighted_kernel; N = 1 integrates e^{cz} over the even extension.
WeightedValue weighted_energy(const RadialField& field, const NonlinearitySpec& spec, double c);

/// Φ_c for a one-dimensional field given on a z-grid.
WeightedValue weighted_energy(const LineField& field, const NonlinearitySpec& spec, double c);

/// ∫e^{cz}u_z² and ∫e^{cz}u² for a one-dimensional field.
double weighted_dirichlet(const LineField& field, double c);
double weighted_l2(const LineField& field, double c);

/// First c in c_grid with Φ_c[u] < 0, if any.
std::optional<double> is_wavelike(const RadialField& field, const NonlinearitySpec& spec,
                                  std::span<const double> c_grid);
std::optional<double> is_wavelike(const LineField& field, const NonlinearitySpec& spec,
                                  std::span<const double> c_grid);

/// E(t) along a run together with the dissipation -∫u_t².
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> dissipation;

  void push(double t, double e, double d);
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// dE/dt by finite differences of the samples (centered inside).
  std::vector<double> dEdt_estimate() const;
  /// Largest increase E(t_{k+1}) - E(t_k); ≤ 0 for a dissipative run.
  double max_increase() const;
};

}  // namespace rdlab
