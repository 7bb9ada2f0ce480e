#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "config.hpp"

namespace rdlab::app {

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  int workers = 1;
};

// Each command writes its artifacts under opts.out_dir, prints a short
// summary to `log` and returns the process exit status. ConfigError and
// NumericalAbort propagate to the caller.
int cmd_simulate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_groundstate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_wave(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_threshold(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_scan(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);

int dispatch(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// 0 Extinction, 1 Undecided, 2 GroundStateConvergence, 3 Ignition.
int outcome_code(Outcome outcome);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

}  // namespace rdlab::app
