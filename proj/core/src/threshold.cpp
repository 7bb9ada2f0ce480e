#include "rdlab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "rdlab/errors.hpp"
#include "rdlab/functionals.hpp"

namespace rdlab {

RadialField make_plateau(double eps, double R, const RadialGrid& grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("plateau: eps must lie in (0, 1)");
  if (!(R > 0.0)) throw ConfigError("plateau: R must be positive");
  if (R + 1.0 > grid.r_max()) throw ConfigError("plateau: ramp exceeds domain (R + 1 > R_max)");
  return RadialField::from_function(
      grid, [&](double r) { return (1.0 - eps) * std::clamp(R + 1.0 - r, 0.0, 1.0); });
}

RadialField make_bump(double radius, const RadialGrid& grid) {
  if (!(radius > 0.0)) throw ConfigError("bump radius must be positive");
  return RadialField::from_function(grid, [&](double r) {
    if (r >= radius) return 0.0;
    const double s = 1.0 - (r / radius) * (r / radius);
    return s * s;
  });
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::ScaledProfile: return "scaled";
    case FamilyKind::Plateau: return "plateau";
    case FamilyKind::Ramp: return "ramp";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Ignition: return "Ignition";
    case Outcome::Extinction: return "Extinction";
    case Outcome::GroundStateConvergence: return "GroundStateConvergence";
    case Outcome::Undecided: return "Undecided";
  }
  return "?";
}

InitialFamily::InitialFamily(FamilyKind kind, std::vector<double> params, double lambda_plus)
    : kind_(kind), params_(std::move(params)), lambda_plus_(lambda_plus) {
  if (!(lambda_plus > 0.0)) throw ConfigError("family: lambda_plus must be positive");
}

InitialFamily InitialFamily::plateau(double eps, double r_unit, double lambda_plus) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("plateau family: eps must lie in (0, 1)");
  if (!(r_unit > 0.0)) throw ConfigError("plateau family: R_unit must be positive");
  return {FamilyKind::Plateau, {eps, r_unit}, lambda_plus};
}

InitialFamily InitialFamily::ramp(double radius, double lambda_plus) {
  if (!(radius >= 0.0)) throw ConfigError("ramp family: R must be non-negative");
  return {FamilyKind::Ramp, {radius}, lambda_plus};
}

InitialFamily InitialFamily::scaled(RadialField profile, double lambda_plus) {
  InitialFamily fam(FamilyKind::ScaledProfile, {}, lambda_plus);
  fam.profile_ = std::move(profile);
  return fam;
}

RadialField InitialFamily::at(double lambda, const RadialGrid& grid) const {
  if (!(lambda >= 0.0)) throw ConfigError("family: lambda must be non-negative");
  switch (kind_) {
    case FamilyKind::Plateau: {
      const double top = 1.0 - params_[0];
      const double edge = lambda * params_[1];
      if (edge > grid.r_max()) throw ConfigError("plateau family: ramp exceeds domain");
      return RadialField::from_function(
          grid, [&](double r) { return top * std::clamp(edge - r, 0.0, 1.0); });
    }
    case FamilyKind::Ramp: {
      const double R = params_[0];
      if (R + 1.0 > grid.r_max()) throw ConfigError("ramp family: ramp exceeds domain");
      return RadialField::from_function(
          grid, [&](double r) { return lambda * std::clamp(R + 1.0 - r, 0.0, 1.0); });
    }
    case FamilyKind::ScaledProfile: {
      const RadialField& p = *profile_;
      return RadialField::from_function(grid, [&](double r) { return lambda * p.at(r); });
    }
  }
  throw ConfigError("unreachable family kind");
}

std::string InitialFamily::label() const {
  std::ostringstream os;
  os << to_string(kind_) << '(';
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  os << ";lambda+=" << lambda_plus_ << ')';
  return os.str();
}

FamilyCheck validate_family(const NonlinearitySpec& spec, const InitialFamily& family,
                            const RadialGrid& grid, int samples) {
  FamilyCheck chk;
  auto fail = [&](const std::string& m) { chk.violations.push_back(m); };
  const double lp = family.lambda_plus();

  const RadialField zero = family.at(0.0, grid);
  if (zero.sup() != 0.0 || *std::min_element(zero.values.begin(), zero.values.end()) != 0.0) {
    fail("(P1) violated: phi_0 is not identically zero");
  }
  std::optional<RadialField> prev;
  for (int k = 0; k <= samples; ++k) {
    const double lam = lp * k / samples;
    RadialField phi = family.at(lam, grid);
    if (*std::min_element(phi.values.begin(), phi.values.end()) < 0.0) {
      fail("family member is negative at lambda = " + std::to_string(lam));
    }
    if (!phi.is_symmetric_decreasing(1e-14)) {
      fail("family member is not symmetric-decreasing at lambda = " + std::to_string(lam));
    }
    // Continuity: a small step in λ moves φ_λ little in L².
    const double dl = 1e-6 * lp;
    RadialField near = family.at(lam + dl, grid);
    RadialField diff(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = near.values[i] - phi.values[i];
      diff.values[i] = d * d;
    }
    if (std::sqrt(integrate(diff)) > 1e-2) {
      fail("(P1) violated: L2 jump near lambda = " + std::to_string(lam));
    }
    if (prev) {
      bool strict = false;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (phi.values[i] < prev->values[i]) {
          fail("(P2) violated: not monotone in lambda at lambda = " + std::to_string(lam));
          break;
        }
        strict = strict || phi.values[i] > prev->values[i];
      }
      if (!strict) fail("(P2) violated: no strict increase at lambda = " + std::to_string(lam));
    }
    prev = std::move(phi);
  }
  chk.energy_plus = energy(family.at(lp, grid), spec);
  if (!(chk.energy_plus < 0.0)) {
    std::ostringstream os;
    os << "(P3) violated: E[phi_lambda+] = " << chk.energy_plus << " is not negative";
    fail(os.str());
  }
  return chk;
}

double ignition_margin(const NonlinearitySpec& spec, const ClassifyConfig& cfg) {
  if (cfg.eps_energy) return *cfg.eps_energy;
  const int n = cfg.grid.dim();
  return 1e-4 * std::abs(spec.V(1.0)) * unit_ball_volume(n) * std::pow(cfg.r_ref, n);
}

OutcomeLabel classify(const NonlinearitySpec& spec, const RadialField& phi,
                      const ClassifyConfig& cfg, RunResult* trace) {
  OutcomeLabel out;
  Evidence& ev = out.evidence;
  if (phi.sup() == 0.0) {
    out.outcome = Outcome::Extinction;
    ev.reason = "zero data";
    return out;
  }
  const double eps_e = ignition_margin(spec, cfg);
  const double t0 = spec.theta0();
  double best_rate = std::numeric_limits<double>::infinity();
  std::optional<double> small_since;
  std::optional<Outcome> verdict;

  RunConfig rc{spec, cfg.grid, cfg.dt, cfg.t_max, 0, cfg.sample_every, {}, true, 0.01, 0.9};
  rc.trackers.front_deltas.clear();
  auto observer = [&](const SampleView& s) {
    ev.t_cert = s.t;
    ev.energy = s.energy;
    ev.sup = s.sup;
    ev.center_final = s.u.values.front();
    const double rate = -s.dissipation;
    if (s.t > 0.0 && rate < best_rate) {
      best_rate = rate;
      ev.dwell_t = s.t;
      ev.dwell_center = s.u.values.front();
      ev.dwell_energy = s.energy;
      ev.dwell_rate = rate;
    }
    if (s.energy < -eps_e) {
      verdict = Outcome::Ignition;
      ev.reason = "energy below -eps_E";
      return false;
    }
    if (t0 > 0.0) {
      if (s.sup < t0 - cfg.eps_theta) {
        verdict = Outcome::Extinction;
        ev.reason = "sup u below theta0 - eps_theta";
        return false;
      }
    } else {
      if (s.sup < cfg.u_small && s.energy >= 0.0 && s.energy <= eps_e) {
        if (!small_since) small_since = s.t;
        if (s.t - *small_since >= cfg.mono_window) {
          verdict = Outcome::Extinction;
          ev.reason = "small and energy-stagnant over the trailing window";
          return false;
        }
      } else {
        small_since.reset();
      }
    }
    return true;
  };
  RunResult res = run(phi, rc, observer);
  if (trace) *trace = res;
  if (res.aborted()) {
    out.outcome = Outcome::Undecided;
    ev.reason = *res.abort_reason;
    return out;
  }
  if (verdict) {
    out.outcome = *verdict;
    return out;
  }
  // End of budget: stationary and close to a known ground state?
  const RadialField& u = *res.final_field;
  const ImexStepper stepper(spec, cfg.grid, cfg.dt);
  const RadialField next = stepper.step(u);
  double ut = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    ut = std::max(ut, std::abs(next.values[i] - u.values[i]) / cfg.dt);
  }
  if (ut < cfg.stationary_tol) {
    for (const auto& c : cfg.candidates) {
      double dist = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        dist = std::max(dist, std::abs(u.values[i] - c.profile.at(cfg.grid.r(i))));
      }
      if (dist < cfg.match_tol) {
        out.outcome = Outcome::GroundStateConvergence;
        ev.matched_mu = c.mu;
        ev.reason = "stationary and matched a ground state";
        return out;
      }
    }
  }
  out.outcome = Outcome::Undecided;
  ev.reason = "T_max reached";
  return out;
}

namespace {

int rank(Outcome o) {
  switch (o) {
    case Outcome::Extinction: return 0;
    case Outcome::Ignition: return 2;
    default: return 1;
  }
}

}  // namespace

ThresholdReport bisect_threshold(const NonlinearitySpec& spec, const InitialFamily& family,
                                 double tol_lambda, const ClassifyConfig& cfg, int workers,
                                 const RunSink& sink) {
  if (!(tol_lambda > 0.0)) throw ConfigError("tol_lambda must be positive");
  const FamilyCheck chk = validate_family(spec, family, cfg.grid);
  if (!chk.ok()) {
    std::string msg = "initial family rejected:";
    for (const auto& v : chk.violations) msg += " " + v + ";";
    throw ConfigError(msg);
  }
  const int w = std::max(1, workers);

  ThresholdReport rep;
  OutcomeLabel zero;
  zero.outcome = Outcome::Extinction;
  zero.evidence.reason = "lambda = 0";
  rep.log.push_back({0.0, zero});
  const double lp = family.lambda_plus();
  auto judge = [&](double lam) {
    if (!sink) return classify(spec, family.at(lam, cfg.grid), cfg);
    RunResult trace;
    OutcomeLabel l = classify(spec, family.at(lam, cfg.grid), cfg, &trace);
    sink(lam, l, trace);
    return l;
  };
  OutcomeLabel top = judge(lp);
  rep.log.push_back({lp, top});
  if (top.outcome != Outcome::Ignition) {
    throw ConfigError("(P3) violated: lambda+ = " + std::to_string(lp) +
                      " is not certified Ignition");
  }
  double lo = 0.0;
  double hi = lp;
  while (hi - lo > tol_lambda) {
    std::vector<double> pts(static_cast<std::size_t>(w));
    for (int k = 0; k < w; ++k) pts[static_cast<std::size_t>(k)] = lo + (hi - lo) * (k + 1) / (w + 1);
    std::vector<std::optional<OutcomeLabel>> labels(pts.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        pool.emplace_back([&, k] { labels[k] = judge(pts[k]); });
      }
    }
    bool undecided = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      rep.log.push_back({pts[k], *labels[k]});
      undecided = undecided || rank(labels[k]->outcome) == 1;
    }
    auto sorted = rep.log;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (rank(sorted[i].label.outcome) < rank(sorted[i - 1].label.outcome)) {
        std::ostringstream os;
        os << "non-monotone classification: " << to_string(sorted[i - 1].label.outcome)
           << " at lambda = " << sorted[i - 1].lambda << " but "
           << to_string(sorted[i].label.outcome) << " at lambda = " << sorted[i].lambda;
        throw NumericalAbort(os.str());
      }
    }
    for (const auto& e : sorted) {
      if (e.label.outcome == Outcome::Extinction) lo = std::max(lo, e.lambda);
      if (e.label.outcome == Outcome::Ignition) hi = std::min(hi, e.lambda);
    }
    if (undecided) {
      rep.stopped_undecided = true;
      break;
    }
  }
  rep.lambda_lo = lo;
  rep.lambda_hi = hi;

  const LambdaOutcome* source = nullptr;
  for (const auto& e : rep.log) {
    if (e.lambda < lo || e.lambda > hi || e.lambda == 0.0) continue;
    if (!source || e.label.evidence.t_cert > source->label.evidence.t_cert) source = &e;
  }
  if (source) {
    auto& d = rep.diagnostics;
    const Evidence& ev = source->label.evidence;
    d.source_lambda = source->lambda;
    d.mu_star_estimate = ev.dwell_center;
    d.center_at_end = ev.center_final;
    d.E_limit_estimate = ev.dwell_energy;
    const GroundStateCandidate* best = nullptr;
    for (const auto& c : cfg.candidates) {
      if (!best || std::abs(c.mu - ev.dwell_center) < std::abs(best->mu - ev.dwell_center)) {
        best = &c;
      }
    }
    if (best) {
      d.matched_mu = best->mu;
      d.E0_lower_bound = best->energy;
    }
  }
  return rep;
}

ProbeReport instability_probe(const NonlinearitySpec& spec, const GroundStateCandidate& candidate,
                              const std::vector<double>& eps_list, const ProbeConfig& cfg) {
  if (!candidate.decay_ok) throw ConfigError("instability_probe: candidate is not validated");
  const RadialGrid& g = cfg.grid;
  const RadialField guess =
      RadialField::from_function(g, [&](double r) { return candidate.profile.at(r); });
  ProbeReport rep{polish_stationary(spec, guess), {}};
  const RadialField& v = rep.ground_state;
  const RadialField bump = make_bump(cfg.bump_radius, g);

  ClassifyConfig margins{.grid = g};
  const double eps_e = ignition_margin(spec, margins);
  const double t0 = spec.theta0();
  const double sup_floor = t0 > 0.0 ? t0 - margins.eps_theta : margins.u_small;

  for (double eps : eps_list) {
    ProbeRun pr;
    pr.eps = eps;
    RadialField phi = v;
    for (std::size_t i = 0; i < g.size(); ++i) {
      phi.values[i] = std::max(0.0, v.values[i] + eps * bump.values[i]);
    }
    const bool still = eps == 0.0;
    RunConfig rc{spec, g, cfg.dt, still ? cfg.t_stationary : cfg.t_max, 0, cfg.sample_every,
                 {}, true, 0.01, 0.9};
    rc.trackers.front_deltas.clear();
    double last = -1.0;
    pr.monotone_departure = true;
    auto observer = [&](const SampleView& s) {
      double d = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) d = std::max(d, std::abs(s.u.values[i] - v.values[i]));
      pr.max_deviation = std::max(pr.max_deviation, d);
      if (last >= 0.0 && d < last - 1e-12) pr.monotone_departure = false;
      last = d;
      if (still) return true;
      if (s.energy < -eps_e) {
        pr.ignition_time = s.t;
        return false;
      }
      if (s.sup < sup_floor) {
        pr.extinction_time = s.t;
        return false;
      }
      return true;
    };
    const RunResult res = run(phi, rc, observer);
    pr.inconclusive = !still && (res.aborted() || (!pr.ignition_time && !pr.extinction_time));
    rep.runs.push_back(pr);
  }
  return rep;
}

}  // namespace rdlab
