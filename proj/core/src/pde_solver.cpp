#include "rdlab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rdlab/errors.hpp"

namespace rdlab {

double dt_max(const NonlinearitySpec& spec, double sup_phi) {
  const double lip = spec.max_abs_df(std::max(sup_phi, 1.0));
  return lip > 0.0 ? 0.5 / lip : std::numeric_limits<double>::infinity();
}

namespace {

TridiagonalLU implicit_diffusion(const RadialGrid& g, double dt) {
  const std::size_t m = g.size();
  const double h = g.h();
  std::vector<double> lower(m - 1, 0.0), diag(m, 1.0), upper(m - 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const bool outer = i + 1 == m;
    if (outer && g.outer_bc() == OuterBC::Dirichlet0) break;
    const double scale = dt / (h * g.cell_volume(i));
    if (i > 0) {
      const double a = scale * g.face_weight(i - 1);
      lower[i - 1] = -a;
      diag[i] += a;
    }
    if (!outer) {
      const double b = scale * g.face_weight(i);
      upper[i] = -b;
      diag[i] += b;
    }
  }
  return {std::move(lower), std::move(diag), std::move(upper)};
}

std::string describe(const char* what, double t) {
  std::ostringstream os;
  os << what << " at t = " << t;
  return os.str();
}

}  // namespace

ImexStepper::ImexStepper(NonlinearitySpec spec, RadialGrid grid, double dt)
    : spec_(std::move(spec)), grid_(std::move(grid)), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  lu_ = implicit_diffusion(grid_, dt_);
}

void ImexStepper::step(std::span<double> u) const {
  for (double& x : u) x += dt_ * spec_.f_extended(x);
  if (grid_.outer_bc() == OuterBC::Dirichlet0) u.back() = 0.0;
  lu_.solve(u);
}

RadialField ImexStepper::step(const RadialField& field) const {
  RadialField out = field;
  step(out.values);
  return out;
}

double dissipation_rate(const RadialGrid& grid, std::span<const double> u_old,
                        std::span<const double> u_new, double dt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ut = (u_new[i] - u_old[i]) / dt;
    sum += grid.cell_volume(i) * ut * ut;
  }
  return unit_sphere_area(grid.dim()) * sum;
}

double front_radius(const RadialField& field, double delta) {
  const auto& u = field.values;
  const auto& g = field.grid;
  for (std::size_t i = u.size(); i-- > 0;) {
    if (u[i] > delta) {
      if (i + 1 == u.size()) return g.r(i);
      return g.r(i) + g.h() * (u[i] - delta) / (u[i] - u[i + 1]);
    }
  }
  return 0.0;
}

SpeedFit estimate_speed(std::span<const double> times, std::span<const double> radii, double t_lo,
                        double t_hi) {
  if (times.size() != radii.size()) throw ConfigError("estimate_speed: size mismatch");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= t_lo && times[k] <= t_hi) pts.emplace_back(times[k], radii[k]);
  }
  if (pts.size() < 10) {
    throw ConfigError("estimate_speed: need at least 10 samples in the fit window, got " +
                      std::to_string(pts.size()));
  }
  const double n = static_cast<double>(pts.size());
  double mt = 0.0, mr = 0.0;
  for (auto [t, r] : pts) {
    mt += t;
    mr += r;
  }
  mt /= n;
  mr /= n;
  double sxx = 0.0, sxy = 0.0;
  for (auto [t, r] : pts) {
    sxx += (t - mt) * (t - mt);
    sxy += (t - mt) * (r - mr);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (auto [t, r] : pts) {
    const double e = r - (mr + slope * (t - mt));
    ssr += e * e;
  }
  return {slope, std::sqrt(ssr / (n - 2.0) / sxx), t_lo, t_hi, pts.size()};
}

SpeedFit estimate_speed(const FrontTrace& trace, std::size_t delta_index, double t_lo,
                        double t_hi) {
  if (delta_index >= trace.radii.size()) throw ConfigError("estimate_speed: no such delta");
  return estimate_speed(trace.times, trace.radii[delta_index], t_lo, t_hi);
}

RunResult run(const RadialField& phi, const RunConfig& cfg, const Observer& observer) {
  if (!(phi.grid == cfg.grid)) throw ConfigError("initial data lives on a different grid");
  if (!phi.all_finite()) throw ConfigError("initial data has non-finite entries");
  if (*std::min_element(phi.values.begin(), phi.values.end()) < 0.0) {
    throw ConfigError("initial data must be non-negative");
  }
  if (!phi.is_symmetric_decreasing(1e-12)) {
    throw ConfigError("initial data must be non-increasing in r");
  }
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (cfg.sample_every < 1) throw ConfigError("sample_every must be >= 1");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  for (double d : cfg.trackers.front_deltas) {
    if (!(d > 0.0 && d < 1.0)) throw ConfigError("front deltas must lie in (0, 1)");
  }

  RunResult res;
  res.dt_max = dt_max(cfg.spec, phi.sup());
  if (cfg.dt > res.dt_max) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " exceeds the stability bound dt_max = " << res.dt_max;
    throw ConfigError(os.str());
  }
  const ImexStepper stepper(cfg.spec, cfg.grid, cfg.dt);
  res.fronts.deltas = cfg.trackers.front_deltas;
  res.fronts.radii.resize(res.fronts.deltas.size());

  RadialField u = phi;
  if (cfg.grid.outer_bc() == OuterBC::Dirichlet0) u.values.back() = 0.0;
  std::vector<double> prev = u.values;
  const auto total = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));

  auto sample = [&](std::size_t k, double diss) {
    const double t = static_cast<double>(k) * cfg.dt;
    const double e = cfg.trackers.energy || observer ? energy(u, cfg.spec) : 0.0;
    const double sup = u.sup();
    res.sample_times.push_back(t);
    if (cfg.trackers.energy) res.energy.push(t, e, 0.0 - diss);
    if (cfg.trackers.sup_norm) res.sup_norm.push_back(sup);
    if (cfg.trackers.center_value) res.center.push_back(u.values.front());
    if (!res.fronts.deltas.empty()) {
      res.fronts.times.push_back(t);
      for (std::size_t j = 0; j < res.fronts.deltas.size(); ++j) {
        res.fronts.radii[j].push_back(front_radius(u, res.fronts.deltas[j]));
      }
    }
    if (observer && !observer(SampleView{t, u, e, 0.0 - diss, sup})) {
      res.stopped_by_observer = true;
      return false;
    }
    return true;
  };

  std::size_t k = 0;
  if (cfg.snapshot_every > 0) res.snapshots.push_back({0.0, u});
  bool go = sample(0, 0.0);
  while (go && k < total) {
    const bool at_sample = (k + 1) % static_cast<std::size_t>(cfg.sample_every) == 0 || k + 1 == total;
    if (at_sample) prev = u.values;
    stepper.step(u.values);
    ++k;
    const double t = static_cast<double>(k) * cfg.dt;
    if (!u.all_finite()) {
      res.abort_reason = describe("non-finite values", t);
      break;
    }
    if (cfg.snapshot_every > 0 && k % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
      res.snapshots.push_back({t, u});
    }
    if (at_sample) {
      go = sample(k, dissipation_rate(cfg.grid, prev, u.values, cfg.dt));
      if (cfg.boundary_guard &&
          front_radius(u, cfg.guard_delta) > cfg.guard_fraction * cfg.grid.r_max()) {
        res.abort_reason = describe("boundary contamination: front reached 0.9 R_max", t);
        break;
      }
    }
  }
  res.steps = k;
  res.t_final = static_cast<double>(k) * cfg.dt;
  res.final_field = u;
  return res;
}

}  // namespace rdlab
