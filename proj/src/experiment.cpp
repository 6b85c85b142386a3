#include "levy/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "levy/tilt_is.hpp"

namespace levy {

namespace {

constexpr const char* kCodeVersion = "levy-passage 0.1.0";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  return path.string();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.process = triplet_from_json(j.at("process"));
  cfg.boundary = Boundary::from_json(j.at("boundary"));
  const auto& h = j.at("horizons");
  cfg.t_min = h.at("T_min").get<double>();
  cfg.t_max = h.at("T_max").get<double>();
  cfg.points_per_decade = h.at("points_per_decade").get<int>();
  cfg.n_paths = j.at("n_paths").get<std::uint64_t>();
  if (j.contains("seed")) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.seed_given = true;
  }
  cfg.dt_max = j.at("dt_max").get<double>();
  std::string scaling = j.value("dt_scaling", std::string("sqrt"));
  if (scaling == "sqrt") {
    cfg.dt_scaling = StepScaling::sqrt_horizon;
  } else if (scaling == "constant") {
    cfg.dt_scaling = StepScaling::constant;
  } else {
    throw std::invalid_argument("dt_scaling must be sqrt or constant");
  }
  cfg.bridge_correction = j.value("bridge_correction", true);
  std::string method = j.value("method", std::string("crude"));
  if (method == "crude") {
    cfg.method = EstimatorMethod::crude;
  } else if (method == "importance") {
    cfg.method = EstimatorMethod::importance;
  } else {
    throw std::invalid_argument("method must be crude or importance");
  }
  cfg.output_dir = j.value("output_dir", std::string("."));
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["process"] = triplet_to_json(process);
  j["boundary"] = boundary.to_json();
  j["horizons"] = {{"T_min", t_min},
                   {"T_max", t_max},
                   {"points_per_decade", points_per_decade}};
  j["n_paths"] = n_paths;
  j["seed"] = seed;
  j["dt_max"] = dt_max;
  j["dt_scaling"] = dt_scaling == StepScaling::sqrt_horizon ? "sqrt" : "constant";
  j["bridge_correction"] = bridge_correction;
  j["method"] = method == EstimatorMethod::crude ? "crude" : "importance";
  j["output_dir"] = output_dir.string();
  return j;
}

std::string ExperimentConfig::config_hash() const {
  // canonical dump without output_dir: only number-bearing fields count
  nlohmann::json j = to_json();
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

namespace {

void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed_given)
    throw std::invalid_argument("seed is mandatory (no wall-clock seeding)");
  auto report = validate_triplet(cfg.process);
  if (!report.empty())
    throw std::invalid_argument("invalid process: " + report.front());
  if (!(cfg.t_min >= 1.0) || !(cfg.t_max > cfg.t_min))
    throw std::invalid_argument("bad horizon range");
  if (cfg.t_max / cfg.t_min < 100.0)
    throw std::invalid_argument(
        "horizons must span at least two decades for an exponent fit");
  if (cfg.points_per_decade < 2)
    throw std::invalid_argument("points_per_decade must be >= 2");
  if (cfg.n_paths < 100) throw std::invalid_argument("n_paths must be >= 100");
  if (!(cfg.dt_max > 0.0)) throw std::invalid_argument("dt_max must be > 0");
}

std::vector<double> horizon_grid(const ExperimentConfig& cfg) {
  std::vector<double> horizons;
  double ratio = std::pow(10.0, 1.0 / cfg.points_per_decade);
  for (double h = cfg.t_min; h < cfg.t_max * (1.0 - 1e-12); h *= ratio)
    horizons.push_back(h);
  horizons.push_back(cfg.t_max);
  return horizons;
}

double step_for(const ExperimentConfig& cfg, const SimConfig& sim,
                double horizon) {
  if (cfg.dt_scaling == StepScaling::constant) return sim.dt_max;
  return sim.dt_max * std::sqrt(horizon / cfg.t_max);
}

SurvivalCurve constant_step_curve(const ExperimentConfig& cfg,
                                  const SimConfig& sim) {
  SurvivalCurve curve;
  std::vector<double> horizons = horizon_grid(cfg);
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    auto est = estimate_survival(cfg.process, cfg.boundary, horizons[j],
                                 cfg.n_paths, sim, cfg.seed, j * cfg.n_paths);
    curve.horizons.push_back(horizons[j]);
    curve.estimates.push_back(est.p);
    curve.ci_low.push_back(est.ci_low);
    curve.ci_high.push_back(est.ci_high);
    curve.std_errors.push_back(est.std_error);
    curve.n_paths.push_back(est.n_paths);
  }
  return curve;
}

SurvivalCurve importance_curve(const ExperimentConfig& cfg,
                               const SimConfig& sim) {
  // side from the boundary slope: falling barriers need negative jumps
  double d = cfg.boundary.deriv(2.0);
  TiltSide side = d < 0.0 ? TiltSide::negative : TiltSide::positive;
  try {
    make_tilt(cfg.process, cfg.boundary, side, std::log(cfg.t_max));
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(std::string("importance method: ") + e.what());
  }

  SurvivalCurve curve;
  std::vector<double> horizons = horizon_grid(cfg);
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    SimConfig local = sim;
    local.dt_max = step_for(cfg, sim, horizons[j]);
    // tilt from the ln T anchor: the early barrier slope is left alone,
    // which keeps the weight spread small
    TiltSpec spec = make_tilt(cfg.process, cfg.boundary, side,
                              std::log(std::max(horizons[j], 3.0)));
    IsEstimate est =
        is_estimate_survival(cfg.process, cfg.boundary, spec, horizons[j],
                             cfg.n_paths, local, cfg.seed + j);
    curve.horizons.push_back(horizons[j]);
    curve.estimates.push_back(est.est.p);
    curve.ci_low.push_back(est.est.ci_low);
    curve.ci_high.push_back(est.est.ci_high);
    curve.std_errors.push_back(est.est.std_error);
    curve.n_paths.push_back(est.est.n_paths);
  }
  return curve;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  std::filesystem::create_directories(cfg.output_dir);

  SimConfig sim;
  sim.dt_max = cfg.dt_max;
  sim.bridge_correction = cfg.bridge_correction;

  auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  if (cfg.method == EstimatorMethod::crude &&
      cfg.dt_scaling == StepScaling::sqrt_horizon) {
    result.curve = survival_curve(cfg.process, cfg.boundary, cfg.t_min,
                                  cfg.t_max, cfg.points_per_decade,
                                  cfg.n_paths, sim, cfg.seed);
  } else if (cfg.method == EstimatorMethod::crude) {
    result.curve = constant_step_curve(cfg, sim);
  } else {
    result.curve = importance_curve(cfg, sim);
  }

  for (double p : result.curve.estimates)
    if (p == 0.0) ++result.censored;
  if (result.censored > 0 && cfg.method == EstimatorMethod::crude) {
    throw ZeroSurvivalError(
        "a horizon returned zero survivors; rerun with method=importance "
        "or reduce T_max");
  }
  result.fit = fit_exponent(result.curve);
  auto t1 = std::chrono::steady_clock::now();
  double wall_s = std::chrono::duration<double>(t1 - t0).count();

  result.hash = cfg.config_hash();
  result.curve_csv = cfg.output_dir / (result.hash + "_curve.csv");
  result.fit_json = cfg.output_dir / (result.hash + "_fit.json");
  result.manifest_json = cfg.output_dir / (result.hash + "_manifest.json");

  write_text(result.curve_csv, result.curve.to_csv());
  write_text(result.fit_json, result.fit.to_json().dump(2) + "\n");

  nlohmann::json manifest;
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = result.hash;
  manifest["seed"] = cfg.seed;
  manifest["code_version"] = kCodeVersion;
  manifest["wall_time_s"] = wall_s;
  manifest["censored_horizons"] = result.censored;
  write_text(result.manifest_json, manifest.dump(2) + "\n");
  return result;
}

PlotData emit_plot_data(const RunResult& run,
                        const std::filesystem::path& output_dir) {
  if (run.curve.horizons.empty())
    throw std::invalid_argument("emit_plot_data: missing run");
  std::filesystem::create_directories(output_dir);

  PlotData plot;
  plot.data_csv = output_dir / (run.hash + "_plot.csv");
  plot.gnuplot_script = output_dir / (run.hash + "_plot.gp");

  std::string csv = "lnT,lnp,lncilow,lncihigh\n";
  char line[256];
  for (std::size_t i = 0; i < run.curve.horizons.size(); ++i) {
    double p = run.curve.estimates[i];
    if (!(p > 0.0)) {
      ++plot.censored;
      continue;
    }
    double lo = run.curve.ci_low[i];
    double hi = run.curve.ci_high[i];
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n",
                  std::log(run.curve.horizons[i]), std::log(p),
                  lo > 0.0 ? std::log(lo) : std::log(p) - 37.0, std::log(hi));
    csv += line;
  }
  write_text(plot.data_csv, csv);

  std::string gp;
  gp += "set datafile separator ','\n";
  gp += "set xlabel 'ln T'\n";
  gp += "set ylabel 'ln p'\n";
  gp += "set key left bottom\n";
  gp += "plot '" + plot.data_csv.filename().string() +
        "' using 1:2:3:4 skip 1 with yerrorbars title 'survival', \\\n";
  gp += "     '' using 1:2 skip 1 with lines notitle\n";
  write_text(plot.gnuplot_script, gp);
  return plot;
}

}  // namespace levy
