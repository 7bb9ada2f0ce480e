#pragma once

// Reaction terms f(u) for u_t = Δu + f(u), their potentials
// V(u) = -∫_0^u f(s) ds and the structural levels derived from V.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdlab {

enum class Kind { Bistable, Ignition, Monostable };

enum class Family { Nagumo, PowerDiff, TriplePower, PurePower, IgnitionBump };

std::string_view to_string(Kind kind);
std::string_view to_string(Family family);
Kind kind_from_string(std::string_view name);
Family family_from_string(std::string_view name);

/// A parameterized reaction term. Immutable after construction.
///
/// The built-in families are
///   nagumo(θ₀)              u(1-u)(u-θ₀)
///   power_diff(p, q)        u^p - u^q,                 1 <= p < q (p = 1 is KPP)
///   triple_power(r,p,q,γ)   -u^r + (1+γ)u^p - γu^q,    1 < r < p < q
///   pure_power(p)           u^p   (stationary experiments only)
///   ignition_bump(θ₀)       κ(u-θ₀)²(1-u) on [θ₀,1], 0 on [0,θ₀], max f = 1
///
/// f is continued to u > 1 by the same formula; ignition_bump is continued
/// by the cubic, which is negative beyond 1.
class NonlinearitySpec {
 public:
  static NonlinearitySpec nagumo(double theta0);
  static NonlinearitySpec power_diff(double p, double q);
  static NonlinearitySpec triple_power(double r, double p, double q, double gamma);
  static NonlinearitySpec pure_power(double p);
  static NonlinearitySpec ignition_bump(double theta0);

  /// Rebuilds a spec from its record fields and checks that the recorded
  /// kind and θ₀ agree with what the family implies.
  static NonlinearitySpec from_record(std::string_view name, std::string_view kind,
                                      const std::vector<double>& params, double theta0);

  Kind kind() const { return kind_; }
  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  double theta0() const { return theta0_; }
  /// Family identifier, e.g. "nagumo".
  std::string_view name() const { return to_string(family_); }
  /// Human-readable label with parameters, e.g. "nagumo(0.25)".
  std::string label() const;

  /// f(u); throws DomainError for u < 0.
  double f(double u) const;
  /// f'(u); throws DomainError for u < 0.
  double df(double u) const;
  /// V(u) = -∫_0^u f in closed form. Throws DomainError for u < 0.
  double V(double u) const;
  /// V by adaptive quadrature of f, independent of the closed form.
  double V_quadrature(double u) const;
  bool has_closed_form_potential() const;

  /// C¹ continuation below zero, f(u) = f'(0)·u for u < 0. Used inside
  /// ODE and Newton iterations that may step marginally past u = 0.
  double f_extended(double u) const;
  double df_extended(double u) const;

  /// max |f'| on [0, upper], sampled.
  double max_abs_df(double upper) const;

  /// True for families meant to satisfy the bistable/ignition/monostable
  /// structure (everything except pure_power).
  bool is_structured() const { return family_ != Family::PurePower; }

  friend bool operator==(const NonlinearitySpec&, const NonlinearitySpec&) = default;

 private:
  NonlinearitySpec(Family family, Kind kind, std::vector<double> params, double theta0);

  double f_raw(double u) const;
  double df_raw(double u) const;

  Family family_;
  Kind kind_;
  std::vector<double> params_;
  double theta0_;
  double scale_ = 1.0;  // κ for ignition_bump
};

/// Free-function forms of the evaluation operations.
inline double eval_f(const NonlinearitySpec& spec, double u) { return spec.f(u); }
inline double eval_V(const NonlinearitySpec& spec, double u) { return spec.V(u); }

/// Result of the structural validation. `ok()` iff no violation was found.
struct StructureReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the sign pattern of f on `samples` uniform points of [0, 2]:
/// f(0) = f(θ₀) = f(1) = 0, f ≤ 0 on [0,θ₀] ∪ (1,2], f > 0 on (θ₀,1),
/// ∫_0^1 f > 0 when θ₀ > 0, f ≡ 0 on [0,θ₀] for ignition, θ₀ = 0 for
/// monostable.
StructureReport validate_structure(const NonlinearitySpec& spec, int samples = 1000);

/// θ* = inf{u > 0 : V(u) < 0}. Throws StructuralError if V ≥ 0 on (0,1).
double theta_star(const NonlinearitySpec& spec);

/// θ_c = inf{u > 0 : V(u) + c²u²/8 < 0}. Throws StructuralError when no
/// such u exists in (0,1) (c beyond the admissible range).
double theta_c(const NonlinearitySpec& spec, double c);

/// Fujita, Serrin, Sobolev and Joseph–Lundgren exponents for dimension N.
class CriticalExponents {
 public:
  explicit CriticalExponents(int dim);

  int dim() const { return dim_; }
  double p_F() const;
  /// Throws UndefinedExponent for N < 3.
  double p_sg() const;
  /// Throws UndefinedExponent for N < 3.
  double p_S() const;
  /// Throws UndefinedExponent for N < 11.
  double p_JL() const;

 private:
  int dim_;
};

inline CriticalExponents critical_exponents(int dim) { return CriticalExponents(dim); }

}  // namespace rdlab
