#include "rdlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "rdlab/errors.hpp"

namespace rdlab {

namespace {

constexpr double kRootTol = 1e-10;
constexpr int kScanPoints = 20000;

// Smallest u in (0, 1] with pred(u) true, resolved to kRootTol. Returns
// nullopt when no scan point satisfies pred.
template <class Pred>
std::optional<double> first_true(Pred pred) {
  double prev = 0.0;
  for (int k = 1; k <= kScanPoints; ++k) {
    const double u = static_cast<double>(k) / kScanPoints;
    if (pred(u)) {
      double lo = prev;
      double hi = u;
      while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
      }
      return hi;
    }
    prev = u;
  }
  return std::nullopt;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::Bistable: return "Bistable";
    case Kind::Ignition: return "Ignition";
    case Kind::Monostable: return "Monostable";
  }
  return "?";
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Nagumo: return "nagumo";
    case Family::PowerDiff: return "power_diff";
    case Family::TriplePower: return "triple_power";
    case Family::PurePower: return "pure_power";
    case Family::IgnitionBump: return "ignition_bump";
  }
  return "?";
}

Kind kind_from_string(std::string_view name) {
  for (Kind k : {Kind::Bistable, Kind::Ignition, Kind::Monostable}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown nonlinearity kind '" + std::string(name) + "'");
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::Nagumo, Family::PowerDiff, Family::TriplePower, Family::PurePower,
                   Family::IgnitionBump}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown nonlinearity family '" + std::string(name) + "'");
}

NonlinearitySpec::NonlinearitySpec(Family family, Kind kind, std::vector<double> params,
                                   double theta0)
    : family_(family), kind_(kind), params_(std::move(params)), theta0_(theta0) {}

NonlinearitySpec NonlinearitySpec::nagumo(double theta0) {
  require(theta0 >= 0.0 && theta0 < 1.0, "nagumo: theta0 must lie in [0, 1)");
  return {Family::Nagumo, theta0 > 0.0 ? Kind::Bistable : Kind::Monostable, {theta0}, theta0};
}

NonlinearitySpec NonlinearitySpec::power_diff(double p, double q) {
  require(p >= 1.0 && q > p, "power_diff: need 1 <= p < q");
  return {Family::PowerDiff, Kind::Monostable, {p, q}, 0.0};
}

NonlinearitySpec NonlinearitySpec::triple_power(double r, double p, double q, double gamma) {
  require(r > 1.0 && p > r && q > p, "triple_power: need 1 < r < p < q");
  const double gamma_min = (p - r) * (q + 1.0) / ((q - p) * (r + 1.0));
  require(gamma > gamma_min, "triple_power: need gamma > (p-r)(q+1)/((q-p)(r+1))");
  // f/u^r = -1 + (1+γ)u^{p-r} - γu^{q-r} is negative near 0 and positive
  // just below 1; θ₀ is its first zero.
  auto g = [&](double u) {
    return -1.0 + (1.0 + gamma) * std::pow(u, p - r) - gamma * std::pow(u, q - r);
  };
  const auto root = first_true([&](double u) { return g(u) > 0.0; });
  if (!root || *root >= 1.0) throw StructuralError("triple_power: no interior zero found");
  double lo = *root - 2.0 / kScanPoints;
  double hi = *root;
  lo = std::max(lo, 0.0);
  auto [a, b] = boost::math::tools::bisect(
      g, lo, hi, [](double x, double y) { return std::abs(y - x) < 1e-15; });
  const double theta0 = 0.5 * (a + b);
  return {Family::TriplePower, Kind::Bistable, {r, p, q, gamma}, theta0};
}

NonlinearitySpec NonlinearitySpec::pure_power(double p) {
  require(p >= 1.0, "pure_power: need p >= 1");
  return {Family::PurePower, Kind::Monostable, {p}, 0.0};
}

NonlinearitySpec NonlinearitySpec::ignition_bump(double theta0) {
  require(theta0 > 0.0 && theta0 < 1.0, "ignition_bump: theta0 must lie in (0, 1)");
  NonlinearitySpec spec(Family::IgnitionBump, Kind::Ignition, {theta0}, theta0);
  // max of (u-θ)²(1-u) on [θ,1] is 4(1-θ)³/27 at u = (2+θ)/3.
  spec.scale_ = 27.0 / (4.0 * std::pow(1.0 - theta0, 3));
  return spec;
}

NonlinearitySpec NonlinearitySpec::from_record(std::string_view name, std::string_view kind,
                                               const std::vector<double>& params,
                                               double theta0) {
  const Family family = family_from_string(name);
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      throw ConfigError(std::string(name) + ": expected " + std::to_string(n) + " params, got " +
                        std::to_string(params.size()));
    }
  };
  NonlinearitySpec spec = [&] {
    switch (family) {
      case Family::Nagumo: need(1); return nagumo(params[0]);
      case Family::PowerDiff: need(2); return power_diff(params[0], params[1]);
      case Family::TriplePower: need(4); return triple_power(params[0], params[1], params[2], params[3]);
      case Family::PurePower: need(1); return pure_power(params[0]);
      case Family::IgnitionBump: need(1); return ignition_bump(params[0]);
    }
    throw ConfigError("unreachable family");
  }();
  if (kind_from_string(kind) != spec.kind()) {
    throw ConfigError(spec.label() + ": recorded kind '" + std::string(kind) +
                      "' does not match the family's kind '" + std::string(to_string(spec.kind())) +
                      "'");
  }
  if (std::abs(theta0 - spec.theta0()) > 1e-9) {
    throw ConfigError(spec.label() + ": recorded theta0 does not match the family's zero");
  }
  return spec;
}

std::string NonlinearitySpec::label() const {
  std::ostringstream os;
  os << name() << '(';
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) os << ',';
    os << params_[i];
  }
  os << ')';
  return os.str();
}

double NonlinearitySpec::f_raw(double u) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Nagumo: return u * (1.0 - u) * (u - p[0]);
    case Family::PowerDiff: return std::pow(u, p[0]) - std::pow(u, p[1]);
    case Family::TriplePower:
      return -std::pow(u, p[0]) + (1.0 + p[3]) * std::pow(u, p[1]) - p[3] * std::pow(u, p[2]);
    case Family::PurePower: return std::pow(u, p[0]);
    case Family::IgnitionBump: {
      if (u <= theta0_) return 0.0;
      const double d = u - theta0_;
      return scale_ * d * d * (1.0 - u);
    }
  }
  return 0.0;
}

double NonlinearitySpec::df_raw(double u) const {
  const auto& p = params_;
  auto dpow = [](double x, double e) { return e == 1.0 ? 1.0 : e * std::pow(x, e - 1.0); };
  switch (family_) {
    case Family::Nagumo: return -3.0 * u * u + 2.0 * (1.0 + p[0]) * u - p[0];
    case Family::PowerDiff: return dpow(u, p[0]) - dpow(u, p[1]);
    case Family::TriplePower:
      return -dpow(u, p[0]) + (1.0 + p[3]) * dpow(u, p[1]) - p[3] * dpow(u, p[2]);
    case Family::PurePower: return dpow(u, p[0]);
    case Family::IgnitionBump: {
      if (u <= theta0_) return 0.0;
      const double d = u - theta0_;
      return scale_ * (2.0 * d * (1.0 - u) - d * d);
    }
  }
  return 0.0;
}

double NonlinearitySpec::f(double u) const {
  if (!(u >= 0.0)) throw DomainError("f(u) requires u >= 0, got " + std::to_string(u));
  return f_raw(u);
}

double NonlinearitySpec::df(double u) const {
  if (!(u >= 0.0)) throw DomainError("f'(u) requires u >= 0, got " + std::to_string(u));
  return df_raw(u);
}

double NonlinearitySpec::f_extended(double u) const {
  return u >= 0.0 ? f_raw(u) : df_raw(0.0) * u;
}

double NonlinearitySpec::df_extended(double u) const {
  return df_raw(u >= 0.0 ? u : 0.0);
}

bool NonlinearitySpec::has_closed_form_potential() const { return true; }

double NonlinearitySpec::V_quadrature(double u) const {
  if (!(u >= 0.0)) throw DomainError("V(u) requires u >= 0, got " + std::to_string(u));
  if (u == 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  auto fn = [this](double s) { return f_raw(s); };
  auto piece = [&](double a, double b) {
    return gauss_kronrod<double, 15>::integrate(fn, a, b, 15, 1e-14);
  };
  // Split at the kink of the ignition profile so each piece is smooth.
  if (family_ == Family::IgnitionBump) {
    if (u <= theta0_) return 0.0;
    return -piece(theta0_, u);
  }
  return -piece(0.0, u);
}

double NonlinearitySpec::V(double u) const {
  if (!(u >= 0.0)) throw DomainError("V(u) requires u >= 0, got " + std::to_string(u));
  switch (family_) {
    case Family::Nagumo: {
      const double t = params_[0];
      const double u2 = u * u;
      return u2 * u2 / 4.0 - (1.0 + t) * u2 * u / 3.0 + t * u2 / 2.0;
    }
    case Family::PurePower: {
      const double e = params_[0] + 1.0;
      return -std::pow(u, e) / e;
    }
    case Family::PowerDiff: {
      const double a = params_[0] + 1.0;
      const double b = params_[1] + 1.0;
      return -std::pow(u, a) / a + std::pow(u, b) / b;
    }
    case Family::TriplePower: {
      const double a = params_[0] + 1.0;
      const double b = params_[1] + 1.0;
      const double c = params_[2] + 1.0;
      const double g = params_[3];
      return std::pow(u, a) / a - (1.0 + g) * std::pow(u, b) / b + g * std::pow(u, c) / c;
    }
    case Family::IgnitionBump: {
      if (u <= theta0_) return 0.0;
      const double d = u - theta0_;
      const double d3 = d * d * d;
      return -scale_ * ((1.0 - theta0_) * d3 / 3.0 - d3 * d / 4.0);
    }
  }
  return V_quadrature(u);
}

double NonlinearitySpec::max_abs_df(double upper) const {
  constexpr int n = 2000;
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(df_raw(upper * i / n)));
  return m;
}

StructureReport validate_structure(const NonlinearitySpec& spec, int samples) {
  StructureReport rep;
  auto fail = [&](std::string msg) { rep.violations.push_back(spec.label() + ": " + msg); };
  const double t0 = spec.theta0();
  constexpr double zero_tol = 1e-12;

  if (std::abs(spec.f(0.0)) > zero_tol) fail("f(0) != 0");
  if (std::abs(spec.f(1.0)) > zero_tol) fail("f(1) != 0");
  if (std::abs(spec.f(t0)) > zero_tol) fail("f(theta0) != 0");

  for (int i = 0; i <= samples; ++i) {
    const double u = 2.0 * i / samples;
    const double fu = spec.f(u);
    if ((u <= t0 || u > 1.0) && fu > zero_tol) {
      fail("f > 0 at u = " + std::to_string(u) + " outside (theta0, 1)");
      break;
    }
    if (u > t0 && u < 1.0 && !(fu > 0.0)) {
      fail("f <= 0 at u = " + std::to_string(u) + " inside (theta0, 1)");
      break;
    }
    if (spec.kind() == Kind::Ignition && u <= t0 && fu != 0.0) {
      fail("ignition f not identically zero on [0, theta0]");
      break;
    }
  }
  if (t0 > 0.0 && !(-spec.V(1.0) > 0.0)) fail("integral of f over [0,1] is not positive");
  if (spec.kind() == Kind::Monostable && t0 != 0.0) fail("monostable kind requires theta0 = 0");
  if (spec.kind() != Kind::Monostable && t0 == 0.0) fail("theta0 = 0 requires monostable kind");
  return rep;
}

double theta_star(const NonlinearitySpec& spec) {
  if (spec.theta0() == 0.0 && spec.kind() == Kind::Monostable) {
    // f > 0 on (0,1) makes V negative immediately.
    if (spec.f(1e-6) > 0.0) return 0.0;
  }
  const auto root = first_true([&](double u) { return spec.V(u) < 0.0; });
  if (!root || *root >= 1.0) {
    throw StructuralError(spec.label() + ": V does not become negative on (0, 1)");
  }
  return *root;
}

double theta_c(const NonlinearitySpec& spec, double c) {
  if (!(c > 0.0)) throw DomainError("theta_c requires c > 0");
  const double k = c * c / 8.0;
  const auto root = first_true([&](double u) { return spec.V(u) + k * u * u < 0.0; });
  if (!root || *root >= 1.0) {
    throw StructuralError(spec.label() + ": V(u) + c^2 u^2 / 8 stays non-negative on (0,1); c = " +
                          std::to_string(c) + " exceeds the admissible range");
  }
  return *root;
}

CriticalExponents::CriticalExponents(int dim) : dim_(dim) {
  if (dim < 1) throw DomainError("critical exponents need N >= 1");
}

double CriticalExponents::p_F() const { return (dim_ + 2.0) / dim_; }

double CriticalExponents::p_sg() const {
  if (dim_ < 3) throw UndefinedExponent("Serrin exponent undefined for N < 3");
  return dim_ / (dim_ - 2.0);
}

double CriticalExponents::p_S() const {
  if (dim_ < 3) throw UndefinedExponent("Sobolev exponent undefined for N < 3");
  return (dim_ + 2.0) / (dim_ - 2.0);
}

double CriticalExponents::p_JL() const {
  if (dim_ < 11) throw UndefinedExponent("Joseph-Lundgren exponent undefined for N < 11");
  return 1.0 + 4.0 / (dim_ - 4.0 - 2.0 * std::sqrt(dim_ - 1.0));
}

}  // namespace rdlab
