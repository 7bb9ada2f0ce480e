#include "config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <type_traits>

#include "rdlab/errors.hpp"

namespace rdlab::app {

namespace {

// Reads the keys of one JSON object and remembers which ones it consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return;
    const std::string where = path_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(where + ": expected a boolean");
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError(where + ": expected an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError(where + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(where + ": expected a string");
    } else {
      if (!it->is_array()) throw ConfigError(where + ": expected an array");
      for (const auto& x : *it) {
        if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
      }
    }
    out = it->template get<T>();
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::optional<Section> sub(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    if (it == node_.end()) return std::nullopt;
    return Section(*it, path_ + "." + key);
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown config key '" + path_ + "." + key + "'");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

OuterBC bc_from_string(const std::string& s) {
  if (s == "Dirichlet0") return OuterBC::Dirichlet0;
  if (s == "Neumann0") return OuterBC::Neumann0;
  throw ConfigError("grid.outer_bc: expected Dirichlet0 or Neumann0, got '" + s + "'");
}

std::string bc_to_string(OuterBC bc) {
  return bc == OuterBC::Dirichlet0 ? "Dirichlet0" : "Neumann0";
}

NonlinearitySpec build_spec(const std::string& name, const std::vector<double>& p) {
  auto need = [&](std::size_t n) {
    if (p.size() != n) {
      throw ConfigError("spec." + name + ": expected " + std::to_string(n) + " params, got " +
                        std::to_string(p.size()));
    }
  };
  switch (family_from_string(name)) {
    case Family::Nagumo: need(1); return NonlinearitySpec::nagumo(p[0]);
    case Family::PowerDiff: need(2); return NonlinearitySpec::power_diff(p[0], p[1]);
    case Family::TriplePower: need(4); return NonlinearitySpec::triple_power(p[0], p[1], p[2], p[3]);
    case Family::PurePower: need(1); return NonlinearitySpec::pure_power(p[0]);
    case Family::IgnitionBump: need(1); return NonlinearitySpec::ignition_bump(p[0]);
  }
  throw ConfigError("spec: unknown family '" + name + "'");
}

NonlinearitySpec parse_spec(Section s) {
  std::string name;
  std::vector<double> params;
  if (!s.has("name")) throw ConfigError("spec.name is required");
  s.get("name", name);
  s.get("params", params);
  NonlinearitySpec spec = build_spec(name, params);
  if (s.has("kind") || s.has("theta0")) {
    std::string kind(to_string(spec.kind()));
    double theta0 = spec.theta0();
    s.get("kind", kind);
    s.get("theta0", theta0);
    spec = NonlinearitySpec::from_record(name, kind, params, theta0);
  }
  s.finish();
  return spec;
}

void parse_grid(Section s, GridConfig& g) {
  std::string bc = bc_to_string(g.outer_bc);
  s.get("dim", g.dim);
  s.get("r_max", g.r_max);
  s.get("nodes", g.nodes);
  s.get("outer_bc", bc);
  g.outer_bc = bc_from_string(bc);
  s.finish();
}

void parse_family(Section s, FamilyConfig& f) {
  s.get("type", f.type);
  s.get("eps", f.eps);
  s.get("r_unit", f.r_unit);
  s.get("radius", f.radius);
  s.get("lambda_plus", f.lambda_plus);
  s.finish();
  if (f.type != "plateau" && f.type != "ramp") {
    throw ConfigError("family.type: expected plateau or ramp, got '" + f.type + "'");
  }
}

}  // namespace

RadialField InitialConfig::make(const RadialGrid& grid) const {
  if (type == "zero") return RadialField(grid);
  if (type == "plateau") return make_plateau(eps, radius, grid);
  if (type == "ramp") {
    if (radius + 1.0 > grid.r_max()) throw ConfigError("ramp: ramp exceeds domain (R + 1 > R_max)");
    return RadialField::from_function(
        grid, [&](double r) { return amplitude * std::clamp(radius + 1.0 - r, 0.0, 1.0); });
  }
  if (type == "bump") {
    RadialField b = make_bump(radius, grid);
    for (double& x : b.values) x *= amplitude;
    return b;
  }
  throw ConfigError("initial.type: expected zero, plateau, ramp or bump, got '" + type + "'");
}

InitialFamily FamilyConfig::make() const {
  if (type == "plateau") return InitialFamily::plateau(eps, r_unit, lambda_plus);
  if (type == "ramp") return InitialFamily::ramp(radius, lambda_plus);
  throw ConfigError("family.type: expected plateau or ramp, got '" + type + "'");
}

const NonlinearitySpec& ExperimentConfig::nonlinearity() const {
  if (!spec) throw ConfigError("config: 'spec' is required");
  return *spec;
}

ExperimentConfig parse_config(const json& doc, const std::string& command) {
  ExperimentConfig cfg;
  cfg.command = command;
  Section root(doc, "config");
  std::string recorded = command;
  root.get("command", recorded);
  if (recorded != command) {
    throw ConfigError("config was written for '" + recorded + "', not '" + command + "'");
  }
  if (auto s = root.sub("spec")) cfg.spec = parse_spec(*s);
  if (auto s = root.sub("grid")) parse_grid(*s, cfg.grid);
  if (auto s = root.sub("run")) {
    auto& r = cfg.run;
    s->get("dt", r.dt);
    s->get("t_end", r.t_end);
    s->get("snapshot_every", r.snapshot_every);
    s->get("sample_every", r.sample_every);
    s->get("front_deltas", r.front_deltas);
    s->get("boundary_guard", r.boundary_guard);
    s->get("fit_window", r.fit_window);
    s->finish();
    if (!r.fit_window.empty() && !(r.fit_window.size() == 2 && r.fit_window[0] < r.fit_window[1])) {
      throw ConfigError("run.fit_window: expected [t_lo, t_hi] with t_lo < t_hi");
    }
  }
  if (auto s = root.sub("initial")) {
    auto& i = cfg.initial;
    s->get("type", i.type);
    s->get("eps", i.eps);
    s->get("radius", i.radius);
    s->get("amplitude", i.amplitude);
    s->finish();
  }
  if (auto s = root.sub("groundstate")) {
    auto& g = cfg.groundstate;
    s->get("mu_points", g.mu_points);
    s->get("refine_tol", g.refine_tol);
    s->get("r_max", g.r_max);
    s->get("profile_r_max", g.profile_r_max);
    s->get("profile_nodes", g.profile_nodes);
    s->finish();
  }
  if (auto s = root.sub("wave")) {
    s->get("half_window", cfg.wave.half_window);
    s->get("dz", cfg.wave.dz);
    s->finish();
  }
  if (auto s = root.sub("classify")) {
    auto& c = cfg.classify;
    if (auto f = s->sub("family")) parse_family(*f, c.family);
    s->get("dt", c.dt);
    s->get("t_max", c.t_max);
    s->get("sample_every", c.sample_every);
    s->get("match_ground_states", c.match_ground_states);
    s->finish();
  }
  if (auto s = root.sub("threshold")) {
    s->get("tol_lambda", cfg.threshold.tol_lambda);
    s->finish();
  }
  if (auto s = root.sub("scan")) {
    s->get("lambdas", cfg.scan.lambdas);
    s->finish();
  }
  root.finish();
  if (!cfg.spec) throw ConfigError("config: 'spec' is required");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, command);
}

json spec_to_json(const NonlinearitySpec& spec) {
  return {{"name", std::string(spec.name())},
          {"kind", std::string(to_string(spec.kind()))},
          {"params", spec.params()},
          {"theta0", spec.theta0()}};
}

json grid_to_json(const GridConfig& g) {
  return {{"dim", g.dim}, {"r_max", g.r_max}, {"nodes", g.nodes}, {"outer_bc", bc_to_string(g.outer_bc)}};
}

json family_to_json(const FamilyConfig& f) {
  return {{"type", f.type},
          {"eps", f.eps},
          {"r_unit", f.r_unit},
          {"radius", f.radius},
          {"lambda_plus", f.lambda_plus}};
}

json to_json(const ExperimentConfig& cfg) {
  json out;
  out["command"] = cfg.command;
  out["spec"] = spec_to_json(cfg.nonlinearity());
  out["grid"] = grid_to_json(cfg.grid);
  const auto& r = cfg.run;
  out["run"] = {{"dt", r.dt},
                {"t_end", r.t_end},
                {"snapshot_every", r.snapshot_every},
                {"sample_every", r.sample_every},
                {"front_deltas", r.front_deltas},
                {"boundary_guard", r.boundary_guard},
                {"fit_window", r.fit_window}};
  const auto& i = cfg.initial;
  out["initial"] = {{"type", i.type}, {"eps", i.eps}, {"radius", i.radius}, {"amplitude", i.amplitude}};
  const auto& g = cfg.groundstate;
  out["groundstate"] = {{"mu_points", g.mu_points},
                        {"refine_tol", g.refine_tol},
                        {"r_max", g.r_max},
                        {"profile_r_max", g.profile_r_max},
                        {"profile_nodes", g.profile_nodes}};
  out["wave"] = {{"half_window", cfg.wave.half_window}, {"dz", cfg.wave.dz}};
  const auto& c = cfg.classify;
  out["classify"] = {{"family", family_to_json(c.family)},
                     {"dt", c.dt},
                     {"t_max", c.t_max},
                     {"sample_every", c.sample_every},
                     {"match_ground_states", c.match_ground_states}};
  out["threshold"] = {{"tol_lambda", cfg.threshold.tol_lambda}};
  out["scan"] = {{"lambdas", cfg.scan.lambdas}};
  return out;
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rdlab::app
