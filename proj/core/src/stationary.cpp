#include "rdlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "event_ode.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/functionals.hpp"
#include "rdlab/tridiagonal.hpp"

namespace rdlab {

namespace {

constexpr int kCrossed = 1;
constexpr int kTurned = 2;

bool is_hit(const ShotOutcome& s, double hit_tol) {
  return s.label == ShotLabel::ConvergedTo && std::abs(s.value) <= hit_tol * s.mu;
}

TailModel tail_for(const NonlinearitySpec& spec, int dim, double r0, double v0) {
  const double d0 = spec.df(0.0);
  if (d0 < 0.0) return {TailKind::Exponential, r0, v0, std::sqrt(-d0), dim};
  if (dim >= 3) return {TailKind::Algebraic, r0, v0, dim - 2.0, dim};
  return {TailKind::None, r0, v0, 0.0, dim};
}

// The tail model must reproduce the slope where it is attached.
bool tail_consistent(const TailModel& t, double w) {
  if (t.kind == TailKind::None) return false;
  const double model = t.dv(t.r0);
  return model < 0.0 && std::abs(w - model) <= 0.1 * std::abs(model);
}

template <class Fn>
double tail_integral(int dim, double r0, Fn&& g) {
  using boost::math::quadrature::gauss_kronrod;
  const double n1 = dim - 1.0;
  auto integrand = [&](double r) { return g(r) * (n1 == 0.0 ? 1.0 : std::pow(r, n1)); };
  return unit_sphere_area(dim) * gauss_kronrod<double, 15>::integrate(
                                     integrand, r0, std::numeric_limits<double>::infinity(), 15,
                                     1e-12);
}

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < w; ++k) {
    pool.emplace_back([&, k] {
      for (std::size_t i = k; i < n; i += w) fn(i);
    });
  }
}

}  // namespace

std::string_view to_string(ShotLabel label) {
  switch (label) {
    case ShotLabel::CrossedZero: return "CrossedZero";
    case ShotLabel::TurnedAround: return "TurnedAround";
    case ShotLabel::ConvergedTo: return "ConvergedTo";
    case ShotLabel::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

double ShotOutcome::v_at(double r) const {
  if (trajectory.empty()) throw ConfigError("shot has no trajectory");
  struct Col {
    const std::vector<ShotSample>& s;
    int which;
    double operator[](std::size_t i) const {
      return which == 0 ? s[i].r : which == 1 ? s[i].v : s[i].w;
    }
    std::size_t size() const { return s.size(); }
  };
  return detail::hermite(Col{trajectory, 0}, Col{trajectory, 1}, Col{trajectory, 2}, r);
}

std::string ShotOutcome::describe() const {
  std::ostringstream os;
  os.precision(10);
  os << to_string(label);
  switch (label) {
    case ShotLabel::CrossedZero: os << "(r=" << r_event << ")"; break;
    case ShotLabel::TurnedAround: os << "(r=" << r_event << ", v=" << value << ")"; break;
    case ShotLabel::ConvergedTo: os << "(" << value << ")"; break;
    case ShotLabel::BudgetExhausted: break;
  }
  return os.str();
}

ShotOutcome shoot(const NonlinearitySpec& spec, int dim, double mu, double r_max,
                  const ShotTolerances& tol) {
  if (dim < 1) throw ConfigError("shoot: dimension must be >= 1");
  if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("shoot: need 0 < mu < 1");
  if (!(r_max > tol.r_start)) throw ConfigError("shoot: r_max too small");

  const double n = dim;
  const double fm = spec.f(mu);
  const double dfm = spec.df(mu);
  const double r0 = tol.r_start;
  const double r2 = r0 * r0;
  detail::State2 x0{mu - fm * r2 / (2 * n) + fm * dfm * r2 * r2 / (8 * n * (n + 2)),
                    -fm * r0 / n + fm * dfm * r2 * r0 / (2 * n * (n + 2))};

  ShotOutcome out;
  out.mu = mu;
  out.trajectory.push_back({0.0, mu, 0.0});
  auto rhs = [&](const detail::State2& x, detail::State2& dx, double r) {
    dx[0] = x[1];
    dx[1] = -(n - 1.0) / r * x[1] - spec.f_extended(x[0]);
  };
  auto detect = [](double, const detail::State2& x) {
    if (x[0] <= 0.0) return kCrossed;
    if (x[1] > 0.0) return kTurned;
    return 0;
  };
  auto visit = [&](double, double r, const auto& eval) {
    const auto x = eval(r);
    out.trajectory.push_back({r, x[0], x[1]});
  };

  detail::OdeSettings s;
  s.abs_tol = tol.abs;
  s.rel_tol = tol.rel;
  s.first_step = r0;
  s.max_step = tol.max_step;
  s.max_steps = tol.max_steps;
  detail::OdeEnd end;
  try {
    end = detail::integrate_with_events(rhs, x0, r0, r_max, s, detect, visit);
  } catch (const std::runtime_error&) {
    out.label = ShotLabel::BudgetExhausted;
    return out;
  }
  out.r_event = end.t;
  switch (end.kind) {
    case detail::EndKind::Event:
      if (end.event == kCrossed) {
        out.label = ShotLabel::CrossedZero;
        out.value = 0.0;
      } else {
        out.label = ShotLabel::TurnedAround;
        out.value = end.x[0];
      }
      break;
    case detail::EndKind::ReachedEnd:
      out.label = ShotLabel::ConvergedTo;
      out.value = dim >= 3 ? end.x[0] + end.t * end.x[1] / (n - 2.0) : end.x[0];
      break;
    case detail::EndKind::StepLimit: out.label = ShotLabel::BudgetExhausted; break;
  }
  return out;
}

double TailModel::v(double r) const {
  switch (kind) {
    case TailKind::Exponential:
      return v0 * std::pow(r0 / r, 0.5 * dim_exponent()) * std::exp(-rate * (r - r0));
    case TailKind::Algebraic: return v0 * std::pow(r0 / r, rate);
    case TailKind::None: return 0.0;
  }
  return 0.0;
}

double TailModel::dv(double r) const {
  switch (kind) {
    case TailKind::Exponential: return -(rate + 0.5 * dim_exponent() / r) * v(r);
    case TailKind::Algebraic: return -rate / r * v(r);
    case TailKind::None: return 0.0;
  }
  return 0.0;
}

GroundStateCandidate candidate_from_profile(const NonlinearitySpec& spec, RadialField profile,
                                            double mu) {
  const auto& g = profile.grid;
  const auto& v = profile.values;
  const std::size_t m = v.size();
  GroundStateCandidate c{mu, profile, {}, 0.0, 0.0, false};
  c.tail = tail_for(spec, g.dim(), g.r_max(), v.back());

  const bool positive = std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  const bool decreasing = profile.is_symmetric_decreasing(1e-12);
  const double w_end = (v[m - 1] - v[m - 2]) / g.h();
  const bool consistent = tail_consistent(c.tail, w_end);

  c.grad_sq_integral = dirichlet_integral(profile);
  double pot = potential_integral(profile, spec);
  if (c.tail.kind != TailKind::None) {
    const TailModel t = c.tail;
    c.grad_sq_integral += tail_integral(g.dim(), g.r_max(), [&](double r) {
      const double d = t.dv(r);
      return d * d;
    });
    pot += tail_integral(g.dim(), g.r_max(), [&](double r) { return spec.V(t.v(r)); });
  }
  c.energy = 0.5 * c.grad_sq_integral + pot;
  c.decay_ok = positive && decreasing && consistent && std::isfinite(c.energy) &&
               std::isfinite(c.grad_sq_integral);
  return c;
}

namespace {

// Profile on the candidate grid from a trajectory valid up to r_cut,
// continued by the tail model attached there.
RadialField profile_from_shot(const ShotOutcome& shot, const TailModel& tail, double r_cut,
                              const RadialGrid& grid) {
  return RadialField::from_function(grid, [&](double r) {
    return r <= r_cut ? shot.v_at(r) : tail.v(r);
  });
}

std::optional<GroundStateCandidate> candidate_from_bracket(const NonlinearitySpec& spec, int dim,
                                                           const ShotOutcome& a,
                                                           const ShotOutcome& b,
                                                           const GroundStateOptions& opts) {
  // Follow a until the two trajectories separate by 1% of v.
  const double r_end = std::min(a.r_event, b.r_event);
  double r_cut = 0.0;
  for (const auto& s : a.trajectory) {
    if (s.r > r_end || s.v <= 0.0) break;
    if (std::abs(b.v_at(s.r) - s.v) > 1e-2 * s.v) break;
    r_cut = s.r;
  }
  if (r_cut <= 0.0) return std::nullopt;
  const double v0 = 0.5 * (a.v_at(r_cut) + b.v_at(r_cut));
  // Slope from the trajectory samples around r_cut.
  const double dr = 1e-6 * std::max(1.0, r_cut);
  const double w0 = (a.v_at(r_cut) - a.v_at(r_cut - dr)) / dr;
  const TailModel tail = tail_for(spec, dim, r_cut, v0);
  if (!tail_consistent(tail, w0)) return std::nullopt;
  const RadialGrid grid(dim, opts.profile_r_max, opts.profile_nodes);
  const ShotOutcome& base = a;
  auto cand = candidate_from_profile(spec, profile_from_shot(base, tail, r_cut, grid), a.mu);
  cand.mu = 0.5 * (a.mu + b.mu);
  if (!cand.decay_ok) return std::nullopt;
  return cand;
}

std::optional<GroundStateCandidate> candidate_from_hit(const NonlinearitySpec& spec, int dim,
                                                       const ShotOutcome& s,
                                                       const GroundStateOptions& opts) {
  const double r_cut = std::min(opts.profile_r_max, s.r_event);
  const double v0 = s.v_at(r_cut);
  const TailModel tail = tail_for(spec, dim, r_cut, v0);
  const RadialGrid grid(dim, opts.profile_r_max, opts.profile_nodes);
  auto cand = candidate_from_profile(spec, profile_from_shot(s, tail, r_cut, grid), s.mu);
  if (!cand.decay_ok) return std::nullopt;
  return cand;
}

}  // namespace

UpsilonReport find_ground_states(const NonlinearitySpec& spec, int dim,
                                 const std::vector<double>& mu_grid,
                                 const GroundStateOptions& opts) {
  if (mu_grid.size() < 2) throw ConfigError("find_ground_states: mu grid needs >= 2 points");
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!(mu_grid[i] > 0.0 && mu_grid[i] < 1.0)) throw ConfigError("mu grid must lie in (0, 1)");
    if (i && !(mu_grid[i] > mu_grid[i - 1])) throw ConfigError("mu grid must be increasing");
  }
  auto fire = [&](double mu) { return shoot(spec, dim, mu, opts.r_max, opts.shot); };

  std::vector<ShotOutcome> shots(mu_grid.size());
  parallel_for(mu_grid.size(), opts.workers, [&](std::size_t i) {
    shots[i] = fire(mu_grid[i]);
    shots[i].trajectory.shrink_to_fit();
  });

  UpsilonReport rep;
  std::vector<char> hit(shots.size());
  for (std::size_t i = 0; i < shots.size(); ++i) {
    rep.grid_labels.push_back(shots[i].label);
    hit[i] = is_hit(shots[i], opts.hit_tol);
  }

  std::size_t best_run = 0, run = 0, first_hit = shots.size(), last_hit = 0;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    run = hit[i] ? run + 1 : 0;
    best_run = std::max(best_run, run);
    if (hit[i]) {
      first_hit = std::min(first_hit, i);
      last_hit = i;
    }
  }
  if (best_run >= 3) {
    rep.continuum = true;
    rep.interval_lo = mu_grid[first_hit];
    rep.interval_hi = mu_grid[last_hit];
    const std::size_t mid = (first_hit + last_hit) / 2;
    for (std::size_t i = mid; i <= last_hit; ++i) {
      if (!hit[i]) continue;
      if (auto c = candidate_from_hit(spec, dim, shots[i], opts)) {
        rep.candidates.push_back(std::move(*c));
        break;
      }
    }
    return rep;
  }

  auto is_pair = [](ShotLabel x, ShotLabel y) {
    return (x == ShotLabel::CrossedZero && y == ShotLabel::TurnedAround) ||
           (x == ShotLabel::TurnedAround && y == ShotLabel::CrossedZero);
  };
  for (std::size_t i = 0; i < shots.size(); ++i) {
    if (hit[i]) {
      if (auto c = candidate_from_hit(spec, dim, shots[i], opts)) rep.candidates.push_back(*c);
      continue;
    }
    if (i + 1 >= shots.size() || !is_pair(shots[i].label, shots[i + 1].label)) continue;
    ShotOutcome a = shots[i];
    ShotOutcome b = shots[i + 1];
    std::optional<ShotOutcome> direct;
    while (b.mu - a.mu > opts.refine_tol) {
      ShotOutcome m = fire(0.5 * (a.mu + b.mu));
      if (m.label == a.label) {
        a = std::move(m);
      } else if (m.label == b.label) {
        b = std::move(m);
      } else {
        if (is_hit(m, opts.hit_tol)) direct = std::move(m);
        break;
      }
    }
    std::optional<GroundStateCandidate> c =
        direct ? candidate_from_hit(spec, dim, *direct, opts)
               : candidate_from_bracket(spec, dim, a.label == ShotLabel::TurnedAround ? a : b,
                                        a.label == ShotLabel::TurnedAround ? b : a, opts);
    if (c) rep.candidates.push_back(std::move(*c));
  }
  return rep;
}

std::vector<double> uniform_mu_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = (static_cast<double>(i) + 1.0) / (static_cast<double>(n) + 1.0);
  return g;
}

double emden_fowler_value(int dim, double lambda, double r) {
  if (dim < 3) throw ConfigError("Emden-Fowler profile needs N >= 3");
  if (!(lambda > 0.0)) throw ConfigError("Emden-Fowler profile needs lambda > 0");
  const double n = dim;
  return std::pow(lambda + r * r / (lambda * n * (n - 2.0)), -(n - 2.0) / 2.0);
}

RadialField emden_fowler_profile(const RadialGrid& grid, double lambda) {
  emden_fowler_value(grid.dim(), lambda, 0.0);
  return RadialField::from_function(
      grid, [&](double r) { return emden_fowler_value(grid.dim(), lambda, r); });
}

PohozaevResult pohozaev_check(const GroundStateCandidate& candidate, const NonlinearitySpec&) {
  if (!candidate.decay_ok || !(candidate.profile.sup() > 0.0)) {
    throw ConfigError("pohozaev_check: not a decaying ground-state candidate");
  }
  PohozaevResult res;
  res.lhs = candidate.energy;
  res.rhs = candidate.grad_sq_integral / candidate.profile.grid.dim();
  res.rel_err = std::abs(res.lhs - res.rhs) / std::abs(res.lhs);
  return res;
}

RadialField polish_stationary(const NonlinearitySpec& spec, const RadialField& guess, double tol,
                              int max_iter) {
  const auto& g = guess.grid;
  const std::size_t m = g.size();
  const bool dirichlet = g.outer_bc() == OuterBC::Dirichlet0;
  const double h = g.h();
  RadialField v = guess;
  if (dirichlet) v.values.back() = 0.0;
  std::vector<double> lap(m);
  for (int it = 0; it < max_iter; ++it) {
    apply_laplacian(g, v.values, lap);
    std::vector<double> res(m), lower(m - 1, 0.0), diag(m, 0.0), upper(m - 1, 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (dirichlet && i + 1 == m) {
        res[i] = 0.0;
        diag[i] = 1.0;
        continue;
      }
      res[i] = -(lap[i] + spec.f_extended(v.values[i]));
      norm = std::max(norm, std::abs(res[i]));
      const double scale = 1.0 / (h * g.cell_volume(i));
      diag[i] = spec.df_extended(v.values[i]);
      if (i > 0) {
        lower[i - 1] = scale * g.face_weight(i - 1);
        diag[i] -= lower[i - 1];
      }
      if (i + 1 < m) {
        upper[i] = scale * g.face_weight(i);
        diag[i] -= upper[i];
      }
    }
    if (norm < tol) return v;
    const auto delta = solve_tridiagonal(lower, diag, upper, res);
    double step = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v.values[i] += delta[i];
      step = std::max(step, std::abs(delta[i]));
    }
    if (step <= 1e-15 * std::max(1.0, v.sup())) return v;
  }
  throw NumericalAbort("polish_stationary: Newton did not converge");
}

}  // namespace rdlab
