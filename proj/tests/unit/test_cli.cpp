#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "config.hpp"
#include "rdlab/csv.hpp"

namespace fs = std::filesystem;
using rdlab::app::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rdlab_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  // Runs the CLI; returns its exit status and keeps stderr in last_err_.
  int rdlab(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(RDLAB_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    last_err_ = ss.str();
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static json read_json(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::string last_err_;
};

const char* kNagumo = R"("spec": {"name": "nagumo", "params": [0.25]})";

}  // namespace

TEST_F(Cli, SimulateZeroData) {
  const auto cfg = write_config("zero.json", std::string("{") + kNagumo +
                                                 R"(, "grid": {"dim": 2, "r_max": 20, "nodes": 129}, "run": {"t_end": 1}})");
  ASSERT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0) << last_err_;
  const auto energy = rdlab::read_csv(dir_ / "out" / "energy.csv");
  ASSERT_FALSE(energy.rows.empty());
  for (const auto& row : energy.rows) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[3], 0.0);
  }
  for (const auto& row : rdlab::read_csv(dir_ / "out" / "fronts.csv").rows) EXPECT_EQ(row[1], 0.0);
}

TEST_F(Cli, SimulatePlateauRecordsNegativeEnergy) {
  const auto cfg = write_config(
      "plateau.json", std::string("{") + kNagumo +
                          R"(, "grid": {"dim": 2, "r_max": 120, "nodes": 1025},
                             "run": {"t_end": 5, "snapshot_every": 100},
                             "initial": {"type": "plateau", "eps": 0.1, "radius": 40}})");
  const auto out = dir_ / "out";
  ASSERT_EQ(rdlab("simulate --seedless --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
  const auto manifest = read_json(out / "manifest.json");
  ASSERT_TRUE(manifest["energy_negative_at"].is_number());
  EXPECT_EQ(manifest["energy_negative_at"].get<double>(), 0.0);
  EXPECT_GT(manifest["dt_max"].get<double>(), 0.01);
  EXPECT_EQ(manifest["snapshots"].size(), 6u);
  EXPECT_TRUE(fs::exists(out / "snapshots" / "snapshot_5.csv"));
  EXPECT_EQ(rdlab::read_csv(out / "snapshots" / "snapshot_0.csv").header,
            (std::vector<std::string>{"r", "u"}));
}

TEST_F(Cli, SimulateFitsFrontSpeed) {
  const auto cfg = write_config(
      "line.json", std::string("{") + kNagumo +
                       R"(, "grid": {"dim": 1, "r_max": 60, "nodes": 1201},
                          "run": {"t_end": 60, "front_deltas": [0.5, 0.1], "fit_window": [30, 60]},
                          "initial": {"type": "plateau", "eps": 0.1, "radius": 10}})");
  const auto out = dir_ / "out";
  ASSERT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
  const auto fits = read_json(out / "manifest.json")["speed_fits"];
  ASSERT_EQ(fits.size(), 2u);
  for (const auto& f : fits) {
    EXPECT_EQ(f["t_lo"].get<double>(), 30.0);
    EXPECT_NEAR(f["speed"].get<double>(), 0.3535534, 0.02) << f.dump();
  }

  const auto bad = write_config("badfit.json", std::string("{") + kNagumo + R"(, "run": {"fit_window": [5, 1]}})");
  EXPECT_EQ(rdlab("simulate --config " + bad.string() + " --out " + out.string()), 2);
}

TEST_F(Cli, DeterministicArtifacts) {
  const auto cfg = write_config("det.json", std::string("{") + kNagumo +
                                                R"(, "grid": {"dim": 3, "r_max": 50, "nodes": 513},
                                                   "run": {"t_end": 4, "snapshot_every": 200},
                                                   "initial": {"type": "bump", "radius": 6, "amplitude": 0.8}})");
  ASSERT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + (dir_ / "b").string()), 0);
  for (const char* f : {"energy.csv", "fronts.csv", "center.csv", "final.csv", "snapshots/snapshot_1.csv",
                        "manifest.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(Cli, ManifestReconstructsConfig) {
  const auto cfg = write_config("m.json", std::string("{") + kNagumo +
                                              R"(, "grid": {"r_max": 30, "nodes": 129}, "run": {"t_end": 0.5}})");
  ASSERT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  const auto manifest = read_json(dir_ / "a" / "manifest.json");
  const auto embedded = write_config("embedded.json", manifest["config"].dump());
  ASSERT_EQ(rdlab("simulate --config " + embedded.string() + " --out " + (dir_ / "b").string()), 0);
  EXPECT_EQ(read_json(dir_ / "b" / "manifest.json")["config"], manifest["config"]);
  EXPECT_EQ(slurp(dir_ / "a" / "energy.csv"), slurp(dir_ / "b" / "energy.csv"));
}

TEST_F(Cli, RampExceedsDomain) {
  const auto cfg = write_config("bad.json", std::string("{") + kNagumo +
                                                R"(, "grid": {"r_max": 20}, "initial": {"type": "ramp", "radius": 19.5}})");
  EXPECT_EQ(rdlab("simulate --config " + cfg.string() + " --out " + (dir_ / "o").string()), 2);
  EXPECT_NE(last_err_.find("ramp exceeds domain"), std::string::npos) << last_err_;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(rdlab("simulate"), 2);
  EXPECT_EQ(rdlab("explode --config x.json"), 2);
  EXPECT_EQ(rdlab("wave --config " + (dir_ / "missing.json").string()), 2);
  const auto typo = write_config("typo.json", std::string("{") + kNagumo + R"(, "wave": {"dzz": 0.1}})");
  EXPECT_EQ(rdlab("wave --config " + typo.string()), 2);
  EXPECT_NE(last_err_.find("dzz"), std::string::npos);
  const auto cfg = write_config("ok.json", std::string("{") + kNagumo + "}");
  EXPECT_EQ(rdlab("wave --workers 0 --config " + cfg.string() + " --out " + (dir_ / "w").string()), 2);
}

TEST_F(Cli, WaveSpeeds) {
  for (auto [theta, speed] : {std::pair{0.25, 0.35355}, std::pair{0.1, 0.56569}}) {
    const auto cfg = write_config("w.json", R"({"spec": {"name": "nagumo", "params": [)" + std::to_string(theta) + "]}}");
    const auto out = dir_ / ("w" + std::to_string(theta));
    ASSERT_EQ(rdlab("wave --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
    EXPECT_NEAR(read_json(out / "manifest.json")["c_dagger"].get<double>(), speed, 1e-4);
    EXPECT_EQ(rdlab::read_csv(out / "profile.csv").header, (std::vector<std::string>{"z", "u"}));
  }
}

TEST_F(Cli, WaveHypothesisViolation) {
  const auto cfg = write_config("kpp.json", R"({"spec": {"name": "power_diff", "params": [1, 2]}})");
  EXPECT_EQ(rdlab("wave --config " + cfg.string() + " --out " + (dir_ / "o").string()), 2);
  EXPECT_NE(last_err_.find("hypothesis"), std::string::npos) << last_err_;
}

TEST_F(Cli, GroundStates) {
  auto gs = [&](const std::string& spec, int dim) {
    const auto cfg = write_config("gs.json", "{\"spec\": " + spec + ", \"grid\": {\"dim\": " + std::to_string(dim) +
                                                 "}, \"groundstate\": {\"mu_points\": 199}}");
    const auto out = dir_ / ("gs" + std::to_string(dim) + std::to_string(spec.size()));
    EXPECT_EQ(rdlab("groundstate --workers 4 --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
    return read_json(out / "manifest.json");
  };
  const auto nag = gs(R"({"name": "nagumo", "params": [0.25]})", 1);
  ASSERT_EQ(nag["candidates"].size(), 1u);
  EXPECT_NEAR(nag["candidates"][0]["mu"].get<double>(), 0.392375, 1e-6);
  EXPECT_LT(nag["candidates"][0]["pohozaev"]["rel_err"].get<double>(), 0.01);
  EXPECT_TRUE(gs(R"({"name": "pure_power", "params": [5]})", 3)["continuum_flag"].get<bool>());
  const auto mono = gs(R"({"name": "nagumo", "params": [0]})", 2);
  EXPECT_TRUE(mono["candidates"].empty());
  EXPECT_FALSE(mono["continuum_flag"].get<bool>());
}

TEST_F(Cli, ThresholdNagumo) {
  const auto cfg = write_config("t.json", std::string("{") + kNagumo +
                                              R"(, "grid": {"dim": 1, "r_max": 100, "nodes": 1025},
                                                 "classify": {"t_max": 200,
                                                   "family": {"type": "plateau", "eps": 0.1, "r_unit": 1, "lambda_plus": 12}},
                                                 "threshold": {"tol_lambda": 1e-3}})");
  const auto out = dir_ / "t";
  ASSERT_EQ(rdlab("threshold --workers 4 --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
  const auto rep = read_json(out / "manifest.json");
  EXPECT_LE(rep["lambda_hi"].get<double>() - rep["lambda_lo"].get<double>(), 1e-3);
  const auto table = rdlab::read_csv(out / "lambda_outcomes.csv");
  ASSERT_EQ(table.rows.size(), rep["log"].size());
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    EXPECT_LT(table.rows[k - 1][0], table.rows[k][0]);
    EXPECT_LE(table.rows[k - 1][1], table.rows[k][1]);
  }
  // One run directory per simulated λ (λ = 0 is not simulated).
  std::size_t dirs = 0;
  for (const auto& e : fs::directory_iterator(out / "runs")) {
    ++dirs;
    const auto m = read_json(e.path() / "manifest.json");
    EXPECT_EQ(e.path().filename().string(), rdlab::app::content_hash(m["key"].dump()));
    EXPECT_TRUE(fs::exists(e.path() / "energy.csv"));
  }
  EXPECT_EQ(dirs + 1, table.rows.size());
}

TEST_F(Cli, ThresholdRejectsP3) {
  const auto cfg = write_config("p3.json", std::string("{") + kNagumo +
                                               R"(, "grid": {"r_max": 100, "nodes": 1025},
                                                  "classify": {"family": {"type": "plateau", "lambda_plus": 1}}})");
  EXPECT_EQ(rdlab("threshold --config " + cfg.string() + " --out " + (dir_ / "o").string()), 2);
  EXPECT_NE(last_err_.find("(P3) violated"), std::string::npos) << last_err_;
}

TEST_F(Cli, ScanLabels) {
  const auto cfg = write_config("s.json", std::string("{") + kNagumo +
                                              R"(, "grid": {"dim": 1, "r_max": 100, "nodes": 1025},
                                                 "classify": {"t_max": 150, "family": {"type": "plateau", "lambda_plus": 12}},
                                                 "scan": {"lambdas": [3.0, 0.5, 1.0, 2.5]}})");
  const auto out = dir_ / "s";
  ASSERT_EQ(rdlab("scan --workers 3 --config " + cfg.string() + " --out " + out.string()), 0) << last_err_;
  const auto rep = read_json(out / "manifest.json");
  EXPECT_TRUE(rep["monotone"].get<bool>());
  const auto table = rdlab::read_csv(out / "lambda_outcomes.csv");
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(table.rows.front()[1], 0.0);
  EXPECT_EQ(table.rows.back()[1], 3.0);
}
