#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "rdlab/csv.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/pde_solver.hpp"
#include "rdlab/stationary.hpp"
#include "rdlab/threshold.hpp"
#include "rdlab/traveling_wave.hpp"

namespace fs = std::filesystem;

namespace rdlab::app {

namespace {

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

CsvTable center_table(const RunResult& res) {
  CsvTable t{{"t", "u0", "sup"}, {}};
  for (std::size_t k = 0; k < res.sample_times.size(); ++k) {
    t.rows.push_back({res.sample_times[k], res.center[k], res.sup_norm[k]});
  }
  return t;
}

std::optional<double> first_negative_energy(const EnergyTrace& trace) {
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace.energies[k] < 0.0) return trace.times[k];
  }
  return std::nullopt;
}

json label_to_json(double lambda, const OutcomeLabel& l) {
  const Evidence& e = l.evidence;
  return {{"lambda", lambda},
          {"outcome", std::string(to_string(l.outcome))},
          {"t_cert", e.t_cert},
          {"energy", e.energy},
          {"sup", e.sup},
          {"center_final", e.center_final},
          {"matched_mu", optional_number(e.matched_mu)},
          {"dwell_t", e.dwell_t},
          {"dwell_center", e.dwell_center},
          {"dwell_energy", e.dwell_energy},
          {"reason", e.reason}};
}

CsvTable outcome_table(std::vector<LambdaOutcome> log) {
  std::sort(log.begin(), log.end(),
            [](const LambdaOutcome& a, const LambdaOutcome& b) { return a.lambda < b.lambda; });
  CsvTable t{{"lambda", "outcome_code", "t_cert", "energy", "sup", "dwell_center"}, {}};
  for (const auto& [lambda, l] : log) {
    const Evidence& e = l.evidence;
    t.rows.push_back({lambda, static_cast<double>(outcome_code(l.outcome)), e.t_cert, e.energy, e.sup,
                      e.dwell_center});
  }
  return t;
}

ClassifyConfig classify_config(const ExperimentConfig& cfg, int workers) {
  const auto& c = cfg.classify;
  ClassifyConfig cc{.grid = cfg.grid.make()};
  cc.dt = c.dt;
  cc.t_max = c.t_max;
  cc.sample_every = c.sample_every;
  if (c.match_ground_states) {
    GroundStateOptions go;
    go.workers = workers;
    cc.candidates =
        find_ground_states(cfg.nonlinearity(), cfg.grid.dim, uniform_mu_grid(199), go).candidates;
  }
  return cc;
}

// Stores the traces of one classified λ under runs/<hash>, where the hash
// covers everything that determines the run.
class RunStore {
 public:
  RunStore(const ExperimentConfig& cfg, fs::path root) : cfg_(cfg), root_(std::move(root)) {}

  void operator()(double lambda, const OutcomeLabel& label, const RunResult& res) const {
    json key = {{"spec", spec_to_json(cfg_.nonlinearity())},
                {"family", family_to_json(cfg_.classify.family)},
                {"lambda", lambda},
                {"grid", grid_to_json(cfg_.grid)},
                {"dt", cfg_.classify.dt}};
    const fs::path dir = prepare_dir(root_ / content_hash(key.dump()));
    json manifest = {{"key", key},
                     {"config", to_json(cfg_)},
                     {"label", label_to_json(lambda, label)},
                     {"dt_max", res.dt_max},
                     {"t_final", res.t_final},
                     {"steps", res.steps},
                     {"abort_reason", res.abort_reason ? json(*res.abort_reason) : json(nullptr)},
                     {"artifacts", {"energy.csv", "center.csv"}}};
    write_csv(dir / "energy.csv", energy_table(res.energy));
    write_csv(dir / "center.csv", center_table(res));
    write_json(dir / "manifest.json", manifest);
  }

 private:
  const ExperimentConfig& cfg_;
  fs::path root_;
};

}  // namespace

int outcome_code(Outcome outcome) {
  switch (outcome) {
    case Outcome::Extinction: return 0;
    case Outcome::Undecided: return 1;
    case Outcome::GroundStateConvergence: return 2;
    case Outcome::Ignition: return 3;
  }
  return 1;
}

int cmd_simulate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const RadialGrid grid = cfg.grid.make();
  const RadialField phi = cfg.initial.make(grid);
  RunConfig rc{.spec = cfg.nonlinearity(), .grid = grid};
  rc.dt = cfg.run.dt;
  rc.t_end = cfg.run.t_end;
  rc.snapshot_every = cfg.run.snapshot_every;
  rc.sample_every = cfg.run.sample_every;
  rc.trackers.front_deltas = cfg.run.front_deltas;
  rc.boundary_guard = cfg.run.boundary_guard;

  const RunResult res = run(phi, rc);

  const fs::path dir = prepare_dir(opts.out_dir);
  json artifacts = {"energy.csv", "fronts.csv", "center.csv"};
  write_csv(dir / "energy.csv", energy_table(res.energy));
  write_csv(dir / "fronts.csv", front_table(res.fronts));
  write_csv(dir / "center.csv", center_table(res));
  json snaps = json::array();
  if (!res.snapshots.empty()) {
    const fs::path sdir = prepare_dir(dir / "snapshots");
    for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
      const std::string name = "snapshot_" + std::to_string(k) + ".csv";
      write_csv(sdir / name, field_table(res.snapshots[k].field));
      snaps.push_back({{"t", res.snapshots[k].t}, {"file", "snapshots/" + name}});
    }
  }
  if (res.final_field) {
    write_csv(dir / "final.csv", field_table(*res.final_field));
    artifacts.push_back("final.csv");
  }
  const auto negative_at = first_negative_energy(res.energy);
  const auto& win = cfg.run.fit_window;
  const double t_lo = win.empty() ? 0.5 * cfg.run.t_end : win[0];
  const double t_hi = win.empty() ? cfg.run.t_end : win[1];
  json fits = json::array();
  for (std::size_t d = 0; d < cfg.run.front_deltas.size(); ++d) {
    json entry = {{"delta", cfg.run.front_deltas[d]}, {"t_lo", t_lo}, {"t_hi", t_hi}};
    try {
      const SpeedFit f = estimate_speed(res.fronts, d, t_lo, t_hi);
      entry["speed"] = f.speed;
      entry["std_error"] = f.std_error;
      entry["samples"] = f.samples;
    } catch (const ConfigError& e) {
      // Too few front samples in the window, e.g. a run that died out.
      entry["speed"] = nullptr;
      entry["note"] = e.what();
    }
    fits.push_back(entry);
  }
  json manifest = {{"command", "simulate"},
                   {"config", to_json(cfg)},
                   {"dt", rc.dt},
                   {"dt_max", res.dt_max},
                   {"t_final", res.t_final},
                   {"steps", res.steps},
                   {"energy_negative_at", optional_number(negative_at)},
                   {"abort_reason", res.abort_reason ? json(*res.abort_reason) : json(nullptr)},
                   {"speed_fits", fits},
                   {"snapshots", snaps},
                   {"artifacts", artifacts}};
  write_json(dir / "manifest.json", manifest);

  log << "simulate: t_final = " << res.t_final << ", steps = " << res.steps;
  if (negative_at) log << ", E < 0 from t = " << *negative_at;
  log << '\n';
  if (res.abort_reason) {
    log << "aborted: " << *res.abort_reason << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_groundstate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const NonlinearitySpec& spec = cfg.nonlinearity();
  const auto& gs = cfg.groundstate;
  if (gs.mu_points < 1) throw ConfigError("groundstate.mu_points must be positive");
  GroundStateOptions go;
  go.refine_tol = gs.refine_tol;
  go.r_max = gs.r_max;
  go.profile_r_max = gs.profile_r_max;
  go.profile_nodes = gs.profile_nodes;
  go.workers = opts.workers;
  const UpsilonReport rep = find_ground_states(spec, cfg.grid.dim, uniform_mu_grid(gs.mu_points), go);

  const fs::path dir = prepare_dir(opts.out_dir);
  json cands = json::array();
  for (std::size_t k = 0; k < rep.candidates.size(); ++k) {
    const auto& c = rep.candidates[k];
    const std::string name = "candidate_" + std::to_string(k) + ".csv";
    write_csv(dir / name, field_table(c.profile));
    json entry = {{"mu", c.mu},
                  {"energy", c.energy},
                  {"grad_sq_integral", c.grad_sq_integral},
                  {"decay_ok", c.decay_ok},
                  {"profile", name}};
    if (c.decay_ok) {
      const auto p = pohozaev_check(c, spec);
      entry["pohozaev"] = {{"lhs", p.lhs}, {"rhs", p.rhs}, {"rel_err", p.rel_err}};
    }
    cands.push_back(entry);
  }
  std::map<std::string, int> counts;
  for (ShotLabel l : rep.grid_labels) ++counts[std::string(to_string(l))];
  json report = {{"command", "groundstate"},
                 {"config", to_json(cfg)},
                 {"dim", cfg.grid.dim},
                 {"continuum_flag", rep.continuum},
                 {"interval", rep.continuum ? json{rep.interval_lo, rep.interval_hi} : json(nullptr)},
                 {"shot_labels", counts},
                 {"candidates", cands}};
  write_json(dir / "manifest.json", report);

  log << "groundstate: " << rep.candidates.size() << " candidate(s)";
  if (rep.continuum) log << ", continuum on [" << rep.interval_lo << ", " << rep.interval_hi << "]";
  for (const auto& c : rep.candidates) log << "\n  mu = " << c.mu << ", E = " << c.energy;
  log << '\n';
  return kExitOk;
}

int cmd_wave(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  WaveOptions wo;
  wo.half_window = cfg.wave.half_window;
  wo.dz = cfg.wave.dz;
  const WaveResult w = compute_wave(cfg.nonlinearity(), wo);

  const fs::path dir = prepare_dir(opts.out_dir);
  write_csv(dir / "profile.csv", line_table(w.profile));
  json manifest = {{"command", "wave"},
                   {"config", to_json(cfg)},
                   {"c_dagger", w.c_dagger},
                   {"c_lo", w.c_lo},
                   {"c_hi", w.c_hi},
                   {"ode_residual", w.ode_residual},
                   {"phi_residual", w.phi_residual},
                   {"artifacts", {"profile.csv"}}};
  write_json(dir / "manifest.json", manifest);
  log << "wave: c = " << format_double(w.c_dagger) << ", ode residual " << w.ode_residual << '\n';
  return kExitOk;
}

int cmd_threshold(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const NonlinearitySpec& spec = cfg.nonlinearity();
  const InitialFamily family = cfg.classify.family.make();
  const ClassifyConfig cc = classify_config(cfg, opts.workers);
  const fs::path dir = prepare_dir(opts.out_dir);
  const RunStore store(cfg, dir / "runs");

  const ThresholdReport rep =
      bisect_threshold(spec, family, cfg.threshold.tol_lambda, cc, opts.workers, store);

  json entries = json::array();
  for (const auto& [lambda, l] : rep.log) entries.push_back(label_to_json(lambda, l));
  const auto& d = rep.diagnostics;
  json report = {{"command", "threshold"},
                 {"config", to_json(cfg)},
                 {"lambda_lo", rep.lambda_lo},
                 {"lambda_hi", rep.lambda_hi},
                 {"stopped_undecided", rep.stopped_undecided},
                 {"diagnostics",
                  {{"source_lambda", d.source_lambda},
                   {"mu_star_estimate", d.mu_star_estimate},
                   {"center_at_end", d.center_at_end},
                   {"E_limit_estimate", d.E_limit_estimate},
                   {"E0_lower_bound", optional_number(d.E0_lower_bound)},
                   {"matched_mu", optional_number(d.matched_mu)}}},
                 {"log", entries},
                 {"artifacts", {"lambda_outcomes.csv"}}};
  write_csv(dir / "lambda_outcomes.csv", outcome_table(rep.log));
  write_json(dir / "manifest.json", report);

  log << "threshold: lambda* in [" << format_double(rep.lambda_lo) << ", "
      << format_double(rep.lambda_hi) << "], center estimate " << d.mu_star_estimate << '\n';
  return kExitOk;
}

int cmd_scan(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  const NonlinearitySpec& spec = cfg.nonlinearity();
  const auto& lambdas = cfg.scan.lambdas;
  if (lambdas.empty()) throw ConfigError("scan.lambdas must list at least one value");
  const InitialFamily family = cfg.classify.family.make();
  const ClassifyConfig cc = classify_config(cfg, opts.workers);
  const fs::path dir = prepare_dir(opts.out_dir);
  const RunStore store(cfg, dir / "runs");

  std::vector<LambdaOutcome> results(lambdas.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < lambdas.size(); k = next++) {
      try {
        RunResult trace;
        OutcomeLabel l = classify(spec, family.at(lambdas[k], cc.grid), cc, &trace);
        store(lambdas[k], l, trace);
        results[k] = {lambdas[k], std::move(l)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::max(1, std::min<int>(opts.workers, static_cast<int>(lambdas.size())));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<LambdaOutcome> sorted = results;
  std::sort(sorted.begin(), sorted.end(),
            [](const LambdaOutcome& a, const LambdaOutcome& b) { return a.lambda < b.lambda; });
  // Extinction* (Undecided|GroundStateConvergence)* Ignition*
  auto phase = [](Outcome o) {
    return o == Outcome::Extinction ? 0 : o == Outcome::Ignition ? 2 : 1;
  };
  bool monotone = true;
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (phase(sorted[k].label.outcome) < phase(sorted[k - 1].label.outcome)) monotone = false;
  }
  json entries = json::array();
  for (const auto& [lambda, l] : results) entries.push_back(label_to_json(lambda, l));
  json report = {{"command", "scan"},
                 {"config", to_json(cfg)},
                 {"monotone", monotone},
                 {"log", entries},
                 {"artifacts", {"lambda_outcomes.csv"}}};
  write_csv(dir / "lambda_outcomes.csv", outcome_table(results));
  write_json(dir / "manifest.json", report);

  log << "scan:";
  for (const auto& [lambda, l] : sorted) log << "\n  " << lambda << "  " << to_string(l.outcome);
  log << '\n';
  if (!monotone) {
    log << "labels are not monotone in lambda\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int dispatch(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log) {
  if (opts.workers < 1) throw ConfigError("--workers must be at least 1");
  const std::string& c = cfg.command;
  if (c == "simulate") return cmd_simulate(cfg, opts, log);
  if (c == "groundstate") return cmd_groundstate(cfg, opts, log);
  if (c == "wave") return cmd_wave(cfg, opts, log);
  if (c == "threshold") return cmd_threshold(cfg, opts, log);
  if (c == "scan") return cmd_scan(cfg, opts, log);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace rdlab::app
