#pragma once

#include <cstdint>
#include <vector>

#include "levy/levy_model.hpp"
#include "levy/passage_mc.hpp"

#include <json.hpp>

namespace levy::oracles {

// P(B(t) <= a, 0 <= t <= T) for Brownian motion with variance sigma2,
// via the reflection principle: 2 Phi(a / sqrt(sigma2 T)) - 1.
double bm_no_exit_exact(double a, double sigma2, double horizon);

// Positivity parameter of the strictly stable law,
// rho = 1/2 + arctan(beta tan(pi alpha / 2)) / (pi alpha), clipped to (0,1).
double stable_rho(double alpha, double beta);

struct RhoProbe {
  double t = 0.0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Monte Carlo estimates of P(X(t) > 0) at the probe times.
std::vector<RhoProbe> spitzer_rho_estimate(const LevyTriplet& t,
                                           const std::vector<double>& probes,
                                           std::uint64_t n_paths,
                                           std::uint64_t seed);

struct LemmaCheckConfig {
  std::uint64_t seed = 20240601;
  std::uint64_t assoc_paths = 10000;
  int assoc_trials = 20;
  std::uint64_t window_paths = 10000;   // increasing-boundary decomposition
  std::uint64_t excursion_paths = 100000;
  std::uint64_t floor_paths = 10000;
};

struct AssocTrial {
  double a = 0.0, b = 0.0, c = 0.0;
  double p_ac = 0.0, p_ab = 0.0, p_bc = 0.0;
  double slack = 0.0;  // p_ac - p_ab * p_bc + 2 SE, negative = violation
  bool holds = false;
};

struct LemmaChecksReport {
  // (i) no-exit supermultiplicativity over adjacent windows
  std::vector<AssocTrial> assoc;
  bool assoc_pass = false;

  // (ii) increasing-boundary decomposition at two horizons
  struct WindowCheck {
    double horizon = 0.0;
    double lhs = 0.0, p_falling = 0.0, p_shifted = 0.0;
    double rhs = 0.0;
    bool holds = false;
  };
  std::vector<WindowCheck> decomposition;
  bool decomposition_pass = false;

  // (iii) Brownian excursion above max((ln T)^5, t^{3/4})
  double excursion_freq = 0.0;
  double excursion_bound = 0.0;  // 10 * exp(-(ln T)^2 / 4)
  bool excursion_pass = false;

  // (iv) positive survival floor for the compensated Poisson martingale
  // below t^0.6
  std::vector<double> floor_horizons;
  std::vector<double> floor_estimates;
  bool floor_pass = false;

  bool all_pass() const {
    return assoc_pass && decomposition_pass && excursion_pass && floor_pass;
  }
};

LemmaChecksReport lemma_checks(const LemmaCheckConfig& cfg);
nlohmann::json lemma_report_to_json(const LemmaChecksReport& rep);

// Long-horizon no-exit estimate for Brownian motion under a falling
// boundary, on a geometrically growing grid with early termination; used
// by the decomposition check whose inner horizon is (ln T)^21.
double bm_no_exit_longrun(const Boundary& b, double horizon,
                          std::uint64_t n_paths, std::uint64_t seed);

}  // namespace levy::oracles
