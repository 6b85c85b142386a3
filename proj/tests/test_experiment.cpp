#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "levy/experiment.hpp"

using namespace levy;

namespace {

nlohmann::json base_config(const std::filesystem::path& dir) {
  nlohmann::json j;
  j["process"] = {{"sigma2", 1.0}, {"drift", 0.0}, {"atoms", nlohmann::json::array()},
                  {"stable", nullptr}};
  j["boundary"] = {{"kind", "constant"}, {"value", 1.0}};
  j["horizons"] = {{"T_min", 4.0}, {"T_max", 1024.0}, {"points_per_decade", 3}};
  j["n_paths"] = 4000;
  j["seed"] = 12345;
  j["dt_max"] = 0.4;
  j["bridge_correction"] = true;
  j["method"] = "crude";
  j["output_dir"] = dir.string();
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("levy_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("experiment run produces curve, fit and manifest") {
  TempDir dir;
  ExperimentConfig cfg = ExperimentConfig::from_json(base_config(dir.path));
  RunResult run = run_experiment(cfg);
  CHECK(std::filesystem::exists(run.curve_csv));
  CHECK(std::filesystem::exists(run.fit_json));
  CHECK(std::filesystem::exists(run.manifest_json));
  // Brownian motion over a constant boundary: exponent near one half
  CHECK(run.fit.delta_hat > 0.4);
  CHECK(run.fit.delta_hat < 0.6);

  auto manifest = nlohmann::json::parse(slurp(run.manifest_json));
  CHECK(manifest.at("config_hash").get<std::string>() == run.hash);
  CHECK(manifest.at("seed").get<std::uint64_t>() == 12345);
  CHECK(manifest.contains("code_version"));
  CHECK(manifest.contains("wall_time_s"));
}

TEST_CASE("identical configs rewrite byte-identical outputs") {
  TempDir dir;
  ExperimentConfig cfg = ExperimentConfig::from_json(base_config(dir.path));
  RunResult first = run_experiment(cfg);
  std::string curve1 = slurp(first.curve_csv);
  std::string fit1 = slurp(first.fit_json);
  RunResult second = run_experiment(cfg);
  CHECK(first.curve_csv == second.curve_csv);
  CHECK(slurp(second.curve_csv) == curve1);
  CHECK(slurp(second.fit_json) == fit1);
}

TEST_CASE("the hash covers every number-bearing field") {
  TempDir dir;
  ExperimentConfig cfg = ExperimentConfig::from_json(base_config(dir.path));
  std::string h0 = cfg.config_hash();
  ExperimentConfig other = cfg;
  other.n_paths += 1;
  CHECK(other.config_hash() != h0);
  other = cfg;
  other.seed += 1;
  CHECK(other.config_hash() != h0);
  other = cfg;
  other.dt_max *= 2.0;
  CHECK(other.config_hash() != h0);
  other = cfg;
  other.dt_scaling = StepScaling::constant;
  CHECK(other.config_hash() != h0);
  other = cfg;
  other.output_dir = "elsewhere";
  CHECK(other.config_hash() == h0);
}

TEST_CASE("config validation failures") {
  TempDir dir;
  auto j = base_config(dir.path);
  j["horizons"]["T_max"] = j["horizons"]["T_min"];
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j)),
                  std::invalid_argument);

  j = base_config(dir.path);
  j.erase("seed");
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j)),
                  std::invalid_argument);

  j = base_config(dir.path);
  j["method"] = "smart";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
}

TEST_CASE("zero-survival horizons demand importance sampling") {
  TempDir dir;
  auto j = base_config(dir.path);
  // an impossible barrier: the process starts above it and dies instantly
  j["boundary"] = {{"kind", "constant"}, {"value", -1.0}};
  j["n_paths"] = 200;
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(j)),
                  ZeroSurvivalError);
}

TEST_CASE("plot emission drops censored rows and round-trips the curve") {
  TempDir dir;
  ExperimentConfig cfg = ExperimentConfig::from_json(base_config(dir.path));
  RunResult run = run_experiment(cfg);
  PlotData plot = emit_plot_data(run, dir.path);
  CHECK(std::filesystem::exists(plot.data_csv));
  CHECK(std::filesystem::exists(plot.gnuplot_script));
  CHECK(plot.censored == 0);

  // the curve CSV parses back to exactly the run's curve
  SurvivalCurve back = SurvivalCurve::from_csv(slurp(run.curve_csv));
  REQUIRE(back.horizons.size() == run.curve.horizons.size());
  for (std::size_t i = 0; i < back.horizons.size(); ++i) {
    CHECK(back.estimates[i] == run.curve.estimates[i]);
    CHECK(back.ci_low[i] == run.curve.ci_low[i]);
  }

  std::string data = slurp(plot.data_csv);
  CHECK(data.rfind("lnT,lnp,lncilow,lncihigh", 0) == 0);

  // censor artificially and count dropped rows
  RunResult censored = run;
  censored.curve.estimates.back() = 0.0;
  PlotData plot2 = emit_plot_data(censored, dir.path);
  CHECK(plot2.censored == 1);
}

TEST_CASE("importance-sampling path through the runner") {
  TempDir dir;
  auto j = base_config(dir.path);
  j["process"]["atoms"] = {{-0.5, 1.0}};
  j["boundary"] =
      {{"kind", "power"}, {"gamma", 0.25}, {"sign", "minus"}, {"offset", 1.0}};
  j["method"] = "importance";
  j["horizons"] = {{"T_min", 2.0}, {"T_max", 256.0}, {"points_per_decade", 3}};
  j["n_paths"] = 2000;
  j["dt_max"] = 0.4;
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  RunResult run = run_experiment(cfg);
  CHECK(run.fit.delta_hat >= 0.0);
  CHECK(std::filesystem::exists(run.curve_csv));
}
