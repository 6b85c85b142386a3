#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "levy/boundary.hpp"
#include "levy/levy_model.hpp"
#include "levy/simulate.hpp"

#include <json.hpp>

namespace levy {

// Raised when a survival estimate of exactly zero blocks an exponent fit;
// the message carries the remedy (importance sampling or fewer decades).
struct ZeroSurvivalError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SurvivalEstimate {
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double std_error = 0.0;  // weighted-sample standard error of the mean
  std::uint64_t n_paths = 0;
};

// Monte Carlo estimate of P(X(t) <= f(t), 0 <= t <= T) over n_paths
// independent paths (streams stream_base .. stream_base + n_paths - 1).
// The estimate is the mean of the (bridge-corrected) no-exit weight; the
// interval is a 95% Wilson interval on that mean.
SurvivalEstimate estimate_survival(const LevyTriplet& t, const Boundary& b,
                                   double horizon, std::uint64_t n_paths,
                                   const SimConfig& cfg, std::uint64_t seed,
                                   std::uint64_t stream_base = 0);

// Same estimator restricted to the window [t_lo, t_hi]; paths are still
// simulated from 0.
SurvivalEstimate estimate_no_exit_window(const LevyTriplet& t,
                                         const Boundary& b, double t_lo,
                                         double t_hi, std::uint64_t n_paths,
                                         const SimConfig& cfg,
                                         std::uint64_t seed,
                                         std::uint64_t stream_base = 0);

struct SurvivalCurve {
  std::vector<double> horizons;
  std::vector<double> estimates;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> std_errors;
  std::vector<std::uint64_t> n_paths;

  std::string to_csv() const;
  static SurvivalCurve from_csv(const std::string& text);
};

// Geometric grid of horizons between T_min and T_max with points_per_decade
// points per decade. Every horizon gets a fresh, disjoint set of path
// streams (no reuse, so the points are independent for regression) and a
// grid step scaled as dt_max * sqrt(T_j / T_max), i.e. dt_max is the
// coarsest step, used at the largest horizon.
SurvivalCurve survival_curve(const LevyTriplet& t, const Boundary& b,
                             double t_min, double t_max,
                             int points_per_decade, std::uint64_t n_paths,
                             const SimConfig& cfg, std::uint64_t seed);

struct ExponentFit {
  double delta_hat = 0.0;
  double std_error = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int points_used = 0;

  nlohmann::json to_json() const;
};

// Weighted least squares of ln p against ln T (weights from the delta
// method, var(ln p) ~ (1-p)/(n p)); delta_hat = -slope, floored at 0. The
// smallest decade of horizons is excluded when at least four points remain.
ExponentFit fit_exponent(const SurvivalCurve& curve);

}  // namespace levy
