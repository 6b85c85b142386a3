#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "levy/boundary.hpp"
#include "levy/levy_model.hpp"
#include "levy/passage_mc.hpp"
#include "levy/simulate.hpp"

#include <json.hpp>

namespace levy {

enum class EstimatorMethod { crude, importance };
enum class StepScaling { sqrt_horizon, constant };

struct ExperimentConfig {
  LevyTriplet process;
  Boundary boundary = Boundary::constant(1.0);
  double t_min = 16.0;
  double t_max = 4096.0;
  int points_per_decade = 4;
  std::uint64_t n_paths = 10000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double dt_max = 0.5;
  // sqrt_horizon: step dt_max * sqrt(T_j / T_max) per horizon (uniform
  // relative refinement); constant: the same step everywhere, which keeps
  // the discrete-max bias horizon-independent for pure-jump processes
  StepScaling dt_scaling = StepScaling::sqrt_horizon;
  bool bridge_correction = true;
  EstimatorMethod method = EstimatorMethod::crude;
  std::filesystem::path output_dir = ".";

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // every field that influences the numbers, in canonical order
  std::string config_hash() const;
};

// Exit codes surfaced by the CLI. Stable: scripts may rely on them.
enum ExitCode {
  kOk = 0,
  kInvalidConfig = 2,
  kSimulationError = 3,
  kZeroSurvival = 4,
};

struct RunResult {
  SurvivalCurve curve;
  ExponentFit fit;
  std::string hash;
  std::filesystem::path curve_csv;
  std::filesystem::path fit_json;
  std::filesystem::path manifest_json;
  std::uint64_t censored = 0;  // zero-survival horizons dropped from plots
};

// Validates the config (throws std::invalid_argument -> exit 2), runs the
// survival curve and exponent fit, and persists curve CSV + fit JSON +
// manifest JSON under output_dir with hash-derived names. Re-running an
// identical config rewrites byte-identical files.
RunResult run_experiment(const ExperimentConfig& cfg);

struct PlotData {
  std::filesystem::path data_csv;
  std::filesystem::path gnuplot_script;
  std::uint64_t censored = 0;
};

// Writes ln T vs ln p with CI bands plus a gnuplot script; zero-survival
// rows are dropped and counted, never rendered.
PlotData emit_plot_data(const RunResult& run,
                        const std::filesystem::path& output_dir);

}  // namespace levy
