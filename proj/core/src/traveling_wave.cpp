#include "rdlab/traveling_wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "event_ode.hpp"
#include "rdlab/errors.hpp"

namespace rdlab {

namespace {

enum class Verdict { TooSlow, TooFast };

constexpr int kCross = 1;     // u reached 0
constexpr int kTurn = 2;      // u' > 0 before reaching 0
constexpr int kFlat = 3;      // entered the zero set [0, θ₀] of an ignition f

struct Sample {
  double z, u, p;
};

struct WaveShot {
  Verdict verdict;
  double z_end;
  std::vector<Sample> path;
};

class Shooter {
 public:
  Shooter(const NonlinearitySpec& spec, const WaveOptions& opts) : spec_(spec), opts_(opts) {
    settings_.abs_tol = 1e-14;
    settings_.rel_tol = 1e-12;
    settings_.first_step = 1e-3;
    settings_.max_step = 0.25;
  }

  double k_plus(double c) const {
    return 0.5 * (-c + std::sqrt(c * c - 4.0 * spec_.df(1.0)));
  }

  // With `grid` non-empty, states at those z (inside the integrated range)
  // are written to `out`.
  WaveShot fire(double c, bool keep, const std::vector<double>& grid = {},
                std::vector<double>* out = nullptr) const {
    const double kp = k_plus(c);
    const detail::State2 x0{1.0 - opts_.eps, -opts_.eps * kp};
    const bool ignition = spec_.kind() == Kind::Ignition;
    const double t0 = spec_.theta0();
    auto rhs = [&](const detail::State2& x, detail::State2& dx, double) {
      dx[0] = x[1];
      dx[1] = -c * x[1] - spec_.f_extended(x[0]);
    };
    auto detect = [&](double, const detail::State2& x) {
      if (x[0] <= 0.0) return kCross;
      if (x[1] > 0.0) return kTurn;
      if (ignition && x[0] <= t0) return kFlat;
      return 0;
    };
    WaveShot shot{Verdict::TooFast, 0.0, {}};
    std::size_t next = 0;
    auto visit = [&](double a, double b, const auto& eval) {
      if (keep) {
        const auto x = eval(b);
        shot.path.push_back({b, x[0], x[1]});
      }
      if (out) {
        while (next < grid.size() && grid[next] <= b) {
          if (grid[next] >= a) (*out)[next] = eval(grid[next])[0];
          ++next;
        }
      }
    };
    const auto end = detail::integrate_with_events(rhs, x0, 0.0, opts_.z_max, settings_, detect, visit);
    shot.z_end = end.t;
    if (end.kind == detail::EndKind::StepLimit) {
      throw NumericalAbort("compute_wave: step size collapsed at c = " + std::to_string(c));
    }
    // Monostable paths above the minimal speed decay algebraically and end here.
    if (end.kind == detail::EndKind::ReachedEnd) {
      shot.verdict = Verdict::TooFast;
      return shot;
    }
    switch (end.event) {
      case kCross: shot.verdict = Verdict::TooSlow; break;
      case kTurn: shot.verdict = Verdict::TooFast; break;
      // u'' + cu' = 0 below θ₀: u → u + u'/c as z → ∞.
      case kFlat: shot.verdict = end.x[0] + end.x[1] / c <= 0.0 ? Verdict::TooSlow : Verdict::TooFast; break;
      default: break;
    }
    return shot;
  }

 private:
  const NonlinearitySpec& spec_;
  const WaveOptions& opts_;
  detail::OdeSettings settings_;
};

double hermite_u(const std::vector<Sample>& path, double z) {
  struct Col {
    const std::vector<Sample>& s;
    int w;
    double operator[](std::size_t i) const { return w == 0 ? s[i].z : w == 1 ? s[i].u : s[i].p; }
    std::size_t size() const { return s.size(); }
  };
  return detail::hermite(Col{path, 0}, Col{path, 1}, Col{path, 2}, z);
}

void check_hypotheses(const NonlinearitySpec& spec) {
  if (!spec.is_structured()) {
    throw ConfigError("compute_wave: " + spec.label() +
                      " is not bistable, ignition or monostable; no front exists");
  }
  if (spec.kind() == Kind::Monostable && spec.df(0.0) != 0.0) {
    std::ostringstream os;
    os << "compute_wave: hypothesis violated for " << spec.label()
       << ": a monostable f needs f'(0) = 0, got f'(0) = " << spec.df(0.0);
    throw ConfigError(os.str());
  }
  if (!(spec.df(1.0) < 0.0)) {
    throw ConfigError("compute_wave: hypothesis violated for " + spec.label() +
                      ": need f'(1) < 0");
  }
  const auto rep = validate_structure(spec);
  if (!rep.ok()) throw StructuralError("compute_wave: " + rep.violations.front());
}

}  // namespace

double wave_residual(const LineField& u, const NonlinearitySpec& spec, double c) {
  const auto& v = u.values;
  const double h = u.dz;
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < v.size(); ++j) {
    const double d1 = (-v[j + 2] + 8.0 * v[j + 1] - 8.0 * v[j - 1] + v[j - 2]) / (12.0 * h);
    const double d2 =
        (-v[j + 2] + 16.0 * v[j + 1] - 30.0 * v[j] + 16.0 * v[j - 1] - v[j - 2]) / (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 + c * d1 + spec.f_extended(v[j])));
  }
  return worst;
}

WaveResult compute_wave(const NonlinearitySpec& spec, const WaveOptions& opts) {
  check_hypotheses(spec);
  if (!(opts.dz > 0.0 && opts.half_window > 10.0 * opts.dz)) {
    throw ConfigError("compute_wave: bad profile window");
  }
  const Shooter shooter(spec, opts);
  const double c_top = 2.0 * std::max(1.0, std::sqrt(spec.max_abs_df(1.0)));
  if (shooter.fire(c_top, false).verdict != Verdict::TooFast) {
    throw ConfigError("compute_wave: no speed bracket in (0, " + std::to_string(c_top) +
                      "] for " + spec.label());
  }
  double lo = 0.0;
  double hi = c_top;
  while (hi - lo > opts.c_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shooter.fire(mid, false).verdict == Verdict::TooSlow ? lo : hi) = mid;
  }
  if (lo == 0.0) {
    throw ConfigError("compute_wave: speed bracket collapsed onto c = 0 for " + spec.label());
  }

  WaveResult res;
  res.c_lo = lo;
  res.c_hi = hi;
  res.c_dagger = 0.5 * (lo + hi);
  const double c = res.c_dagger;

  const WaveShot a = shooter.fire(lo, true);
  const WaveShot b = shooter.fire(hi, true);
  // Keep the slow-side path while both bracket paths agree.
  double z_cut = 0.0;
  for (const auto& s : a.path) {
    if (s.z > std::min(a.z_end, b.z_end) || s.u <= 0.0) break;
    if (std::abs(hermite_u(b.path, s.z) - s.u) > 1e-5 * s.u) break;
    z_cut = s.z;
  }
  const double u_cut = hermite_u(a.path, z_cut);
  if (!(u_cut > 0.0 && u_cut < 0.5)) {
    throw NumericalAbort("compute_wave: bracket paths separate before the front for " +
                         spec.label());
  }
  // ū(z_half) = 1/2 on the kept path.
  double zl = 0.0, zr = z_cut;
  for (int it = 0; it < 200 && zr - zl > 1e-14; ++it) {
    const double zm = 0.5 * (zl + zr);
    (hermite_u(a.path, zm) > 0.5 ? zl : zr) = zm;
  }
  const double z_half = 0.5 * (zl + zr);

  const double kp = shooter.k_plus(c);
  const double km = 0.5 * (-c - std::sqrt(c * c - 4.0 * spec.df(0.0)));
  const auto n = static_cast<std::size_t>(std::llround(2.0 * opts.half_window / opts.dz)) + 1;
  res.profile.z_start = -opts.half_window;
  res.profile.dz = 2.0 * opts.half_window / static_cast<double>(n - 1);
  res.profile.values.assign(n, 0.0);

  // Sample the kept part through the dense output of a fresh integration
  // at the lower bracket speed.
  std::vector<double> inner_z;
  std::vector<std::size_t> inner_idx;
  for (std::size_t j = 0; j < n; ++j) {
    const double zs = res.profile.z(j) + z_half;  // shooting coordinate
    if (zs < 0.0) {
      res.profile.values[j] = 1.0 - opts.eps * std::exp(kp * zs);
    } else if (zs > z_cut) {
      res.profile.values[j] = u_cut * std::exp(km * (zs - z_cut));
    } else {
      inner_z.push_back(zs);
      inner_idx.push_back(j);
    }
  }
  std::vector<double> inner_u(inner_z.size(), 0.0);
  shooter.fire(lo, false, inner_z, &inner_u);
  for (std::size_t k = 0; k < inner_idx.size(); ++k) res.profile.values[inner_idx[k]] = inner_u[k];

  res.ode_residual = wave_residual(res.profile, spec, c);
  res.phi_residual = std::abs(weighted_energy(res.profile, spec, c).value());
  return res;
}

}  // namespace rdlab
