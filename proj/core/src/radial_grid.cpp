#include "rdlab/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rdlab/errors.hpp"

namespace rdlab {

double unit_sphere_area(int dim) {
  if (dim < 1) throw DomainError("dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double unit_ball_volume(int dim) { return unit_sphere_area(dim) / dim; }

RadialGrid::RadialGrid(int dim, double r_max, std::size_t nodes, OuterBC outer_bc)
    : dim_(dim), r_max_(r_max), nodes_(nodes), outer_bc_(outer_bc) {
  if (dim < 1) throw ConfigError("grid dimension must be >= 1");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("grid R_max must be positive");
  if (nodes < 16) throw ConfigError("grid needs at least 16 nodes");
  h_ = r_max / static_cast<double>(nodes - 1);

  const double n = dim;
  auto pw = [&](double r) { return std::pow(r, n); };
  cell_volume_.resize(nodes);
  face_weight_.resize(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double lo = i == 0 ? 0.0 : (static_cast<double>(i) - 0.5) * h_;
    const double hi = i + 1 == nodes ? r_max : (static_cast<double>(i) + 0.5) * h_;
    cell_volume_[i] = (pw(hi) - pw(lo)) / n;
  }
  for (std::size_t i = 0; i + 1 < nodes; ++i) {
    face_weight_[i] = std::pow((static_cast<double>(i) + 0.5) * h_, n - 1.0);
  }
}

RadialField::RadialField(RadialGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw ConfigError("field size does not match grid");
}

RadialField::RadialField(RadialGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

double RadialField::sup() const { return *std::max_element(values.begin(), values.end()); }

bool RadialField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

bool RadialField::is_symmetric_decreasing(double tol) const {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] + tol) return false;
  }
  return true;
}

double RadialField::at(double r) const {
  if (r < 0.0) r = -r;
  if (r >= grid.r_max()) return grid.outer_bc() == OuterBC::Dirichlet0 ? 0.0 : values.back();
  const double x = r / grid.h();
  const auto i = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

void apply_laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out) {
  const std::size_t m = grid.size();
  if (u.size() != m || out.size() != m) throw ConfigError("laplacian: size mismatch");
  const double h = grid.h();
  out[0] = grid.face_weight(0) * (u[1] - u[0]) / (h * grid.cell_volume(0));
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double flux_out = grid.face_weight(i) * (u[i + 1] - u[i]);
    const double flux_in = grid.face_weight(i - 1) * (u[i] - u[i - 1]);
    out[i] = (flux_out - flux_in) / (h * grid.cell_volume(i));
  }
  if (grid.outer_bc() == OuterBC::Dirichlet0) {
    out[m - 1] = 0.0;
  } else {
    out[m - 1] = -grid.face_weight(m - 2) * (u[m - 1] - u[m - 2]) / (h * grid.cell_volume(m - 1));
  }
}

RadialField laplacian(const RadialField& field) {
  RadialField out(field.grid);
  apply_laplacian(field.grid, field.values, out.values);
  return out;
}

double integrate(const RadialField& field) {
  const auto& g = field.grid;
  const double n1 = g.dim() - 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = (i == 0 || i + 1 == g.size()) ? 0.5 : 1.0;
    const double r = g.r(i);
    sum += w * field.values[i] * (n1 == 0.0 ? 1.0 : std::pow(r, n1));
  }
  return unit_sphere_area(g.dim()) * sum * g.h();
}

double weighted_kernel_scaled(int dim, double s) {
  if (dim < 2) throw DomainError("weighted kernel needs N >= 2; use the weight e^{cz} for N = 1");
  if (!(s >= 0.0)) throw DomainError("weighted kernel needs c·r >= 0");
  using boost::math::quadrature::gauss_kronrod;
  const double e = dim - 2.0;
  auto integrand = [&](double th) {
    const double w = std::exp(-s * (1.0 - std::cos(th)));
    return e == 0.0 ? w : w * std::pow(std::sin(th), e);
  };
  // For large s the mass sits in θ ≲ 1/√s; split there so the adaptive
  // rule resolves the peak.
  const double split = std::min(std::numbers::pi, 12.0 / std::sqrt(std::max(s, 1.0)));
  double total = gauss_kronrod<double, 31>::integrate(integrand, 0.0, split, 15, 1e-12);
  // Past the split the integrand is below e^{-s(1-cos split)}; skip when that
  // cannot reach the last digit.
  if (split < std::numbers::pi && std::numbers::pi * integrand(split) > 1e-17 * total) {
    total += gauss_kronrod<double, 31>::integrate(integrand, split, std::numbers::pi, 15, 1e-12);
  }
  return total;
}

double weighted_kernel(int dim, double c, double r) {
  if (!(c > 0.0)) throw DomainError("weighted kernel needs c > 0");
  if (!(r >= 0.0)) throw DomainError("weighted kernel needs r >= 0");
  const double s = c * r;
  return std::exp(s) * weighted_kernel_scaled(dim, s);
}

}  // namespace rdlab
