#pragma once

// Uniform grids on [0, R_max] for radial functions in ℝᴺ, the radial
// Laplacian and N-dimensional quadrature of radial integrands.

#include <cstddef>
#include <span>
#include <vector>

namespace rdlab {

enum class OuterBC { Dirichlet0, Neumann0 };

/// Surface measure of the unit sphere S^{N-1} ⊂ ℝᴺ (2 for N = 1).
double unit_sphere_area(int dim);

/// Volume of the unit ball in ℝᴺ.
double unit_ball_volume(int dim);

/// Nodes r_i = i·h, i = 0..M-1, h = R_max/(M-1).
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, std::size_t nodes, OuterBC outer_bc = OuterBC::Dirichlet0);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return nodes_; }
  double h() const { return h_; }
  OuterBC outer_bc() const { return outer_bc_; }
  double r(std::size_t i) const { return static_cast<double>(i) * h_; }

  /// ∫ r^{N-1} dr over the control volume of node i (without the sphere
  /// factor). Cells are [r_{i-1/2}, r_{i+1/2}] clipped to [0, R_max].
  double cell_volume(std::size_t i) const { return cell_volume_[i]; }
  /// r_{i+1/2}^{N-1}, the face weight between nodes i and i+1.
  double face_weight(std::size_t i) const { return face_weight_[i]; }

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  int dim_;
  double r_max_;
  std::size_t nodes_;
  double h_;
  OuterBC outer_bc_;
  std::vector<double> cell_volume_;
  std::vector<double> face_weight_;
};

/// Values of a radial function on a grid.
struct RadialField {
  RadialGrid grid;
  std::vector<double> values;

  RadialField(RadialGrid g, std::vector<double> v);
  explicit RadialField(RadialGrid g);

  /// Samples fn(r) at every node.
  template <class Fn>
  static RadialField from_function(const RadialGrid& g, Fn&& fn) {
    RadialField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = fn(g.r(i));
    return out;
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double sup() const;
  bool all_finite() const;
  /// Values non-increasing in r up to `tol`.
  bool is_symmetric_decreasing(double tol = 0.0) const;
  /// Piecewise-linear interpolation; 0 beyond R_max under Dirichlet0.
  double at(double r) const;
};

/// Discrete radial Laplacian (1/r^{N-1})(r^{N-1}u_r)_r in conservative
/// form. At r = 0 this reduces to 2N(u_1-u_0)/h² = N·u″(0). The outer node
/// reports 0 under Dirichlet0 (it is not an unknown) and uses a zero-flux
/// half cell under Neumann0.
RadialField laplacian(const RadialField& field);

/// Same operator applied to a raw value span (size must match the grid).
void apply_laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out);

/// ω_{N-1}·∫_0^{R_max} g(r) r^{N-1} dr by the composite trapezoid rule on
/// the grid nodes.
double integrate(const RadialField& field);

template <class Fn>
double integrate(const RadialGrid& grid, Fn&& g) {
  return integrate(RadialField::from_function(grid, g));
}

/// K_N(s) = ∫_0^π e^{s cos θ} sin^{N-2}θ dθ with s = c·r, for N ≥ 2.
/// Throws DomainError for N < 2 or s < 0.
double weighted_kernel(int dim, double c, double r);

/// e^{-s}·K_N(s); finite for all s ≥ 0.
double weighted_kernel_scaled(int dim, double s);

}  // namespace rdlab
