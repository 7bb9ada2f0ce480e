#pragma once

// The front ū'' + cū' + f(ū) = 0 connecting 1 (z → -∞) to 0 (z → +∞),
// found by shooting from the unstable direction at u = 1 and bisecting c.

#include "rdlab/functionals.hpp"
#include "rdlab/nonlinearity.hpp"

namespace rdlab {

struct WaveOptions {
  /// Profile sampled on [-half_window, half_window].
  double half_window = 40.0;
  double dz = 0.005;
  /// Bisection stops when the c bracket is this narrow.
  double c_tol = 1e-13;
  /// Initial offset from u = 1 along the unstable eigenvector.
  double eps = 1e-7;
  double z_max = 400.0;
};

struct WaveResult {
  double c_dagger = 0.0;
  double c_lo = 0.0;
  double c_hi = 0.0;
  /// Normalized by ū(0) = 1/2.
  LineField profile;
  /// sup |ū'' + cū' + f(ū)| over interior samples (fourth-order differences).
  double ode_residual = 0.0;
  /// |Φ_{c†}[ū]| on the sampled window.
  double phi_residual = 0.0;
};

/// Needs a structured spec with f'(1) < 0; monostable specs need
/// f'(0) = 0. Throws ConfigError on violated hypotheses or when no bracket
/// exists in (0, c_hi], c_hi = 2·max(1, sup|f'|^{1/2}).
WaveResult compute_wave(const NonlinearitySpec& spec, const WaveOptions& opts = {});

/// sup |u'' + c u' + f(u)| over interior samples of a line field.
double wave_residual(const LineField& u, const NonlinearitySpec& spec, double c);

}  // namespace rdlab
