#pragma once

// Adaptive Dormand–Prince integration of a planar system with terminal
// events located by bisection on the dense output.

#include <array>
#include <cmath>
#include <cstddef>

#include <boost/numeric/odeint.hpp>

namespace rdlab::detail {

using State2 = std::array<double, 2>;

struct OdeSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double first_step = 1e-4;
  double max_step = 0.5;
  double min_step = 1e-13;
  std::size_t max_steps = 2'000'000;
};

enum class EndKind { Event, ReachedEnd, StepLimit };

struct OdeEnd {
  EndKind kind;
  int event = 0;
  double t;
  State2 x;
};

/// detect(t, x) returns 0 when no event holds and an event id otherwise;
/// an event that holds at the end of a step is located to the first time
/// it holds inside that step. visit(t0, t1, eval) sees every accepted step
/// [t0, t1] (the first call has t0 = t1 = start) and may query the dense
/// output with eval(t) for t in that range.
template <class Rhs, class Detect, class Visit>
OdeEnd integrate_with_events(Rhs rhs, State2 x0, double t0, double t_end, const OdeSettings& s,
                             Detect detect, Visit visit) {
  namespace ode = boost::numeric::odeint;
  if (int e = detect(t0, x0)) return {EndKind::Event, e, t0, x0};
  visit(t0, t0, [&](double) { return x0; });
  auto stepper =
      ode::make_dense_output(s.abs_tol, s.rel_tol, s.max_step, ode::runge_kutta_dopri5<State2>());
  stepper.initialize(x0, t0, s.first_step);
  double t_prev = t0;
  State2 x{};
  auto eval = [&](double tq) {
    State2 y{};
    stepper.calc_state(tq, y);
    return y;
  };
  for (std::size_t n = 0; n < s.max_steps; ++n) {
    stepper.do_step(rhs);
    double t = stepper.current_time();
    const bool past_end = t >= t_end;
    if (past_end) t = t_end;
    stepper.calc_state(t, x);
    if (int e = detect(t, x)) {
      double lo = t_prev;
      double hi = t;
      State2 xm{};
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, xm);
        (detect(mid, xm) ? hi : lo) = mid;
      }
      stepper.calc_state(hi, x);
      int id = detect(hi, x);
      if (id == 0) id = e;
      visit(t_prev, hi, eval);
      return {EndKind::Event, id, hi, x};
    }
    visit(t_prev, t, eval);
    if (past_end) return {EndKind::ReachedEnd, 0, t, x};
    if (stepper.current_time_step() < s.min_step) return {EndKind::StepLimit, 0, t, x};
    t_prev = t;
  }
  return {EndKind::StepLimit, 0, t_prev, x};
}

/// Cubic Hermite interpolation of samples (t_k, y_k, y'_k) at tq, with tq
/// inside [t_0, t_last]. `ts` must be increasing.
template <class Ts, class Ys, class Ds>
double hermite(const Ts& ts, const Ys& ys, const Ds& ds, double tq) {
  std::size_t lo = 0;
  std::size_t hi = ts.size() - 1;
  if (tq <= ts[lo]) return ys[lo];
  if (tq >= ts[hi]) return ys[hi];
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (ts[mid] <= tq ? lo : hi) = mid;
  }
  const double h = ts[hi] - ts[lo];
  const double u = (tq - ts[lo]) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * ys[lo] + (u3 - 2 * u2 + u) * h * ds[lo] +
         (-2 * u3 + 3 * u2) * ys[hi] + (u3 - u2) * h * ds[hi];
}

}  // namespace rdlab::detail
