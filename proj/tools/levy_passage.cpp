#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "levy/bound_machinery.hpp"
#include "levy/boundary.hpp"
#include "levy/experiment.hpp"
#include "levy/oracles.hpp"
#include "levy/parallel.hpp"
#include "levy/passage_mc.hpp"

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

int run_one(const std::string& config_path, bool plots) {
  auto j = load_json(config_path);
  levy::ExperimentConfig cfg = levy::ExperimentConfig::from_json(j);
  levy::RunResult result = levy::run_experiment(cfg);
  if (plots) levy::emit_plot_data(result, cfg.output_dir);
  std::cout << "wrote " << result.curve_csv.string() << "\n"
            << "wrote " << result.fit_json.string() << "\n"
            << "wrote " << result.manifest_json.string() << "\n"
            << "delta_hat = " << result.fit.delta_hat << " +- "
            << result.fit.std_error << "\n";
  return levy::kOk;
}

const char* integral_class_name(levy::IntegralClass c) {
  switch (c) {
    case levy::IntegralClass::finite:
      return "finite";
    case levy::IntegralClass::infinite:
      return "infinite";
    default:
      return "inconclusive";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo first-passage estimation for Levy processes "
               "over one-sided moving boundaries"};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (default: LEVY_PASSAGE_THREADS or all cores)");

  std::string config_path, suite_path, boundary_path, constants_path;
  bool plots = false;

  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "experiment JSON")->required();
  run->add_flag("--plots", plots, "also emit plot data");

  auto* suite = app.add_subcommand("suite", "run a list of experiments");
  suite->add_option("suite", suite_path, "suite JSON")->required();
  suite->add_flag("--plots", plots, "also emit plot data");

  auto* check = app.add_subcommand("check-boundary",
                                   "integral tests and growth properties");
  check->add_option("boundary", boundary_path, "boundary JSON")->required();
  double quad_upper = 1e8, growth_horizon = 1e6;
  check->add_option("--quad-upper", quad_upper, "quadrature cap");
  check->add_option("--growth-horizon", growth_horizon, "growth check horizon");

  auto* verify = app.add_subcommand("verify-bounds",
                                    "check the iteration inequalities");
  verify->add_option("constants", constants_path, "constants JSON")->required();

  auto* calibrate = app.add_subcommand(
      "calibrate", "Brownian reflection-principle calibration grid");
  std::uint64_t cal_paths = 20000, cal_seed = 1;
  std::string cal_out;
  calibrate->add_option("--n-paths", cal_paths, "paths per grid point");
  calibrate->add_option("--seed", cal_seed, "rng seed");
  calibrate->add_option("--out", cal_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) levy::set_thread_count(threads);

  try {
    if (run->parsed()) return run_one(config_path, plots);

    if (suite->parsed()) {
      auto j = load_json(suite_path);
      auto base = std::filesystem::path(suite_path).parent_path();
      for (const auto& entry : j.at("experiments")) {
        auto path = base / entry.get<std::string>();
        std::cout << "== " << path.string() << "\n";
        int rc = run_one(path.string(), plots);
        if (rc != levy::kOk) return rc;
      }
      return levy::kOk;
    }

    if (check->parsed()) {
      levy::Boundary b = levy::Boundary::from_json(load_json(boundary_path));
      auto uch = levy::uchiyama_test(b, quad_upper);
      auto l2 = levy::l2_derivative_test(b, quad_upper);
      auto growth = levy::growth_props(b, growth_horizon);
      nlohmann::json out;
      out["uchiyama"] = {{"class", integral_class_name(uch.cls)},
                         {"value", uch.value}};
      out["l2_derivative"] = {{"class", integral_class_name(l2.cls)},
                              {"value", l2.value}};
      out["growth"] = {{"prop1_holds", growth.prop1_holds},
                       {"prop1_c", growth.prop1_c},
                       {"prop2_holds", growth.prop2_holds},
                       {"prop2_c", growth.prop2_c}};
      std::cout << out.dump(2) << "\n";
      return levy::kOk;
    }

    if (verify->parsed()) {
      auto j = load_json(constants_path);
      levy::bounds::ProofConstants pc;
      pc.c1 = j.value("c1", 1.0);
      pc.c2 = j.value("c2", 1.0);
      pc.beta = j.value("beta", 0.5);
      if (j.contains("l2_norm_sq")) {
        pc.l2_norm_sq = j.at("l2_norm_sq").get<double>();
      } else if (j.contains("boundary")) {
        auto b = levy::Boundary::from_json(j.at("boundary"));
        auto l2 = levy::l2_derivative_test(b);
        if (l2.cls != levy::IntegralClass::finite)
          throw std::invalid_argument(
              "boundary has no finite squared-derivative norm");
        pc.l2_norm_sq = l2.value;
      }
      auto rep = levy::bounds::verify_inequalities(
          pc, j.value("samples", std::uint64_t{1000}),
          j.value("max_level", 30), j.value("seed", std::uint64_t{1}));
      std::cout << levy::bounds::inequality_report_to_json(rep).dump(2)
                << "\n";
      return rep.violations.empty() ? levy::kOk : 1;
    }

    if (calibrate->parsed()) {
      std::string csv = "a,T,exact,estimate,ci_low,ci_high\n";
      char line[256];
      std::uint64_t stream_base = 0;
      for (double a : {0.5, 1.0, 2.0}) {
        for (double horizon : {1.0, 4.0, 16.0, 64.0}) {
          levy::SimConfig sim;
          sim.dt_max = 0.01 * std::sqrt(horizon);
          auto est = levy::estimate_survival(
              levy::LevyTriplet::brownian(1.0), levy::Boundary::constant(a),
              horizon, cal_paths, sim, cal_seed, stream_base);
          stream_base += cal_paths;
          std::snprintf(line, sizeof(line), "%g,%g,%.6f,%.6f,%.6f,%.6f\n", a,
                        horizon, levy::oracles::bm_no_exit_exact(a, 1.0, horizon),
                        est.p, est.ci_low, est.ci_high);
          csv += line;
        }
      }
      if (cal_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(cal_out, std::ios::binary);
        out << csv;
        std::cout << "wrote " << cal_out << "\n";
      }
      return levy::kOk;
    }
  } catch (const levy::ZeroSurvivalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levy::kZeroSurvival;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levy::kInvalidConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return levy::kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levy::kSimulationError;
  }
  return levy::kOk;
}
