#pragma once

// Experiment configuration: JSON in, fully resolved JSON out. Every key has
// a default except the nonlinearity; unknown keys are rejected so typos do
// not silently fall back to defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rdlab/nonlinearity.hpp"
#include "rdlab/radial_grid.hpp"
#include "rdlab/threshold.hpp"

namespace rdlab::app {

using json = nlohmann::ordered_json;

struct GridConfig {
  int dim = 1;
  double r_max = 100.0;
  std::size_t nodes = 2049;
  OuterBC outer_bc = OuterBC::Dirichlet0;

  RadialGrid make() const { return RadialGrid(dim, r_max, nodes, outer_bc); }
};

/// Initial data for `simulate`: zero | plateau | ramp | bump.
struct InitialConfig {
  std::string type = "zero";
  double eps = 0.1;      // plateau
  double radius = 10.0;  // plateau R, ramp R, bump R_b
  double amplitude = 1.0;

  RadialField make(const RadialGrid& grid) const;
};

struct RunSection {
  double dt = 0.01;
  double t_end = 10.0;
  int snapshot_every = 0;
  int sample_every = 10;
  std::vector<double> front_deltas{0.5};
  bool boundary_guard = true;
  /// [t_lo, t_hi] for the front speed fits; empty means [t_end/2, t_end].
  std::vector<double> fit_window{};
};

/// plateau(eps, r_unit) | ramp(radius)
struct FamilyConfig {
  std::string type = "plateau";
  double eps = 0.1;
  double r_unit = 1.0;
  double radius = 5.0;
  double lambda_plus = 12.0;

  InitialFamily make() const;
};

struct GroundStateSection {
  std::size_t mu_points = 999;
  double refine_tol = 1e-10;
  double r_max = 200.0;
  double profile_r_max = 40.0;
  std::size_t profile_nodes = 4001;
};

struct WaveSection {
  double half_window = 40.0;
  double dz = 0.005;
};

struct ClassifySection {
  FamilyConfig family;
  double dt = 0.01;
  double t_max = 400.0;
  int sample_every = 10;
  /// Shoot for ground states first and match stalled runs against them.
  bool match_ground_states = false;
};

struct ThresholdSection {
  double tol_lambda = 1e-3;
};

struct ScanSection {
  std::vector<double> lambdas;
};

struct ExperimentConfig {
  std::string command;
  std::optional<NonlinearitySpec> spec;
  GridConfig grid;
  RunSection run;
  InitialConfig initial;
  GroundStateSection groundstate;
  WaveSection wave;
  ClassifySection classify;
  ThresholdSection threshold;
  ScanSection scan;

  const NonlinearitySpec& nonlinearity() const;
};

/// Parses a config for `command`. Missing keys take defaults; unknown keys
/// and malformed values raise ConfigError.
ExperimentConfig parse_config(const json& doc, const std::string& command);
ExperimentConfig load_config(const std::filesystem::path& path, const std::string& command);

/// Resolved config with every default spelled out; parse_config of the
/// result reproduces the same ExperimentConfig.
json to_json(const ExperimentConfig& cfg);

json spec_to_json(const NonlinearitySpec& spec);
json grid_to_json(const GridConfig& grid);
json family_to_json(const FamilyConfig& family);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string content_hash(const std::string& text);

}  // namespace rdlab::app
