#include "rdlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdlab/errors.hpp"

namespace rdlab {

namespace {

double potential(const NonlinearitySpec& spec, double u) {
  return u >= 0.0 ? spec.V(u) : -0.5 * spec.df(0.0) * u * u;
}

// Sums a_k·e^{s_k} keeping the largest exponent as offset.
class ScaledSum {
 public:
  void add(double a, double s) {
    if (a == 0.0) return;
    terms_.push_back({a, s});
    top_ = std::max(top_, s);
  }
  WeightedValue result() const {
    if (terms_.empty()) return {};
    double sum = 0.0;
    for (const auto& [a, s] : terms_) sum += a * std::exp(s - top_);
    return {sum, top_};
  }

 private:
  std::vector<std::pair<double, double>> terms_;
  double top_ = -std::numeric_limits<double>::infinity();
};

void require_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("weighted functional needs c > 0");
}

}  // namespace

double LineField::at(double zq) const {
  if (values.empty()) return 0.0;
  const double x = (zq - z_start) / dz;
  if (x <= 0.0) return values.front();
  const auto last = static_cast<double>(values.size() - 1);
  if (x >= last) return values.back();
  const auto j = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(j);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

double dirichlet_integral(const RadialField& field) {
  const auto& g = field.grid;
  const auto& u = field.values;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double d = u[i + 1] - u[i];
    sum += g.face_weight(i) * d * d;
  }
  return unit_sphere_area(g.dim()) * sum / g.h();
}

double potential_integral(const RadialField& field, const NonlinearitySpec& spec) {
  const auto& g = field.grid;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = field.values[i];
    if (u != 0.0) sum += g.cell_volume(i) * potential(spec, u);
  }
  return unit_sphere_area(g.dim()) * sum;
}

double energy(const RadialField& field, const NonlinearitySpec& spec) {
  return 0.5 * dirichlet_integral(field) + potential_integral(field, spec);
}

double WeightedValue::value() const {
  if (scaled == 0.0) return 0.0;
  return scaled * std::exp(log_offset);
}

WeightedValue weighted_energy(const RadialField& field, const NonlinearitySpec& spec, double c) {
  require_c(c);
  const auto& g = field.grid;
  const auto& u = field.values;
  const int n = g.dim();
  // Kernel e^{s}·k(s): k = 1 + e^{-2s} for the even line (2cosh s), and the
  // scaled spherical kernel otherwise.
  auto kernel = [&](double s) {
    return n == 1 ? 1.0 + std::exp(-2.0 * s) : weighted_kernel_scaled(n, s);
  };
  const double sphere = n == 1 ? 1.0 : unit_sphere_area(n - 1);
  ScaledSum acc;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double d = u[i + 1] - u[i];
    if (d == 0.0) continue;
    const double s = c * (g.r(i) + 0.5 * g.h());
    acc.add(0.5 * g.face_weight(i) * d * d / g.h() * kernel(s), s);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (u[i] == 0.0) continue;
    const double s = c * g.r(i);
    acc.add(g.cell_volume(i) * potential(spec, u[i]) * kernel(s), s);
  }
  WeightedValue out = acc.result();
  out.scaled *= sphere;
  return out;
}

WeightedValue weighted_energy(const LineField& field, const NonlinearitySpec& spec, double c) {
  require_c(c);
  const auto& u = field.values;
  const double dz = field.dz;
  ScaledSum acc;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double d = u[j + 1] - u[j];
    if (d != 0.0) acc.add(0.5 * d * d / dz, c * (field.z(j) + 0.5 * dz));
  }
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] == 0.0) continue;
    const double w = (j == 0 || j + 1 == u.size()) ? 0.5 : 1.0;
    acc.add(w * dz * potential(spec, u[j]), c * field.z(j));
  }
  return acc.result();
}

double weighted_dirichlet(const LineField& field, double c) {
  const auto& u = field.values;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double d = u[j + 1] - u[j];
    sum += d * d / field.dz * std::exp(c * (field.z(j) + 0.5 * field.dz));
  }
  return sum;
}

double weighted_l2(const LineField& field, double c) {
  const auto& u = field.values;
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double w = (j == 0 || j + 1 == u.size()) ? 0.5 : 1.0;
    sum += w * u[j] * u[j] * std::exp(c * field.z(j));
  }
  return sum * field.dz;
}

std::optional<double> is_wavelike(const RadialField& field, const NonlinearitySpec& spec,
                                  std::span<const double> c_grid) {
  for (double c : c_grid) {
    if (weighted_energy(field, spec, c).negative()) return c;
  }
  return std::nullopt;
}

std::optional<double> is_wavelike(const LineField& field, const NonlinearitySpec& spec,
                                  std::span<const double> c_grid) {
  for (double c : c_grid) {
    if (weighted_energy(field, spec, c).negative()) return c;
  }
  return std::nullopt;
}

void EnergyTrace::push(double t, double e, double d) {
  times.push_back(t);
  energies.push_back(e);
  dissipation.push_back(d);
}

std::vector<double> EnergyTrace::dEdt_estimate() const {
  const std::size_t n = times.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  out[0] = (energies[1] - energies[0]) / (times[1] - times[0]);
  out[n - 1] = (energies[n - 1] - energies[n - 2]) / (times[n - 1] - times[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = (energies[k + 1] - energies[k - 1]) / (times[k + 1] - times[k - 1]);
  }
  return out;
}

double EnergyTrace::max_increase() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < energies.size(); ++k) m = std::max(m, energies[k] - energies[k - 1]);
  return m;
}

}  // namespace rdlab
