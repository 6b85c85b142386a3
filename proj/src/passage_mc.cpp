#include "levy/passage_mc.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "levy/numerics.hpp"
#include "levy/parallel.hpp"

namespace levy {

namespace {

SurvivalEstimate reduce_weights(const std::vector<double>& w) {
  KahanSum sum;
  for (double v : w) sum.add(v);
  double n = static_cast<double>(w.size());
  double mean = sum.value() / n;
  KahanSum var_sum;
  for (double v : w) var_sum.add((v - mean) * (v - mean));
  double variance = w.size() > 1 ? var_sum.value() / (n - 1.0) : 0.0;

  SurvivalEstimate est;
  est.p = mean;
  est.n_paths = w.size();
  est.std_error = std::sqrt(variance / n);
  auto ci = wilson95(sum.value(), n);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

SurvivalEstimate run_estimator(const LevyTriplet& t, const Boundary& b,
                               double t_lo, double t_hi,
                               std::uint64_t n_paths, const SimConfig& cfg,
                               std::uint64_t seed,
                               std::uint64_t stream_base) {
  require_valid(t);
  require_valid(cfg);
  if (n_paths < 100)
    throw std::invalid_argument("need at least 100 paths");
  if (!(t_hi > 0.0) || t_lo < 0.0 || t_lo >= t_hi)
    throw std::invalid_argument("bad window");

  std::vector<double> w(n_paths);
  parallel_for(n_paths, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      rng::Stream stream(seed, stream_base + i, rng::Domain::base);
      w[i] = detail::walk_no_exit(t, &b, t_hi, cfg, stream, nullptr, t_lo,
                                  nullptr)
                 .weight;
    }
  });
  return reduce_weights(w);
}

}  // namespace

SurvivalEstimate estimate_survival(const LevyTriplet& t, const Boundary& b,
                                   double horizon, std::uint64_t n_paths,
                                   const SimConfig& cfg, std::uint64_t seed,
                                   std::uint64_t stream_base) {
  return run_estimator(t, b, 0.0, horizon, n_paths, cfg, seed, stream_base);
}

SurvivalEstimate estimate_no_exit_window(const LevyTriplet& t,
                                         const Boundary& b, double t_lo,
                                         double t_hi, std::uint64_t n_paths,
                                         const SimConfig& cfg,
                                         std::uint64_t seed,
                                         std::uint64_t stream_base) {
  return run_estimator(t, b, t_lo, t_hi, n_paths, cfg, seed, stream_base);
}

SurvivalCurve survival_curve(const LevyTriplet& t, const Boundary& b,
                             double t_min, double t_max,
                             int points_per_decade, std::uint64_t n_paths,
                             const SimConfig& cfg, std::uint64_t seed) {
  if (!(t_min >= 1.0)) throw std::invalid_argument("t_min must be >= 1");
  if (!(t_max / t_min >= 16.0))
    throw std::invalid_argument("horizon grid too small: need t_max/t_min >= 16");
  if (points_per_decade < 1)
    throw std::invalid_argument("points_per_decade must be >= 1");

  std::vector<double> horizons;
  double ratio = std::pow(10.0, 1.0 / points_per_decade);
  for (double h = t_min; h < t_max * (1.0 - 1e-12); h *= ratio)
    horizons.push_back(h);
  horizons.push_back(t_max);

  SurvivalCurve curve;
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    double horizon = horizons[j];
    SimConfig local = cfg;
    local.dt_max = cfg.dt_max * std::sqrt(horizon / t_max);
    SurvivalEstimate est =
        estimate_survival(t, b, horizon, n_paths, local, seed,
                          j * n_paths);
    curve.horizons.push_back(horizon);
    curve.estimates.push_back(est.p);
    curve.ci_low.push_back(est.ci_low);
    curve.ci_high.push_back(est.ci_high);
    curve.std_errors.push_back(est.std_error);
    curve.n_paths.push_back(est.n_paths);
  }
  return curve;
}

std::string SurvivalCurve::to_csv() const {
  std::string out = "T,p,ci_low,ci_high,n\n";
  char line[256];
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%llu\n",
                  horizons[i], estimates[i], ci_low[i], ci_high[i],
                  static_cast<unsigned long long>(n_paths[i]));
    out += line;
  }
  return out;
}

SurvivalCurve SurvivalCurve::from_csv(const std::string& text) {
  SurvivalCurve curve;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("T,p,", 0) != 0)
    throw std::invalid_argument("bad curve CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, p, lo, hi;
    unsigned long long n;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%llu", &t, &p, &lo, &hi,
                    &n) != 5)
      throw std::invalid_argument("bad curve CSV row: " + line);
    curve.horizons.push_back(t);
    curve.estimates.push_back(p);
    curve.ci_low.push_back(lo);
    curve.ci_high.push_back(hi);
    curve.std_errors.push_back(0.0);
    curve.n_paths.push_back(n);
  }
  return curve;
}

nlohmann::json ExponentFit::to_json() const {
  return {{"delta_hat", delta_hat},
          {"stderr", std_error},
          {"window", {window_lo, window_hi}},
          {"points_used", points_used}};
}

ExponentFit fit_exponent(const SurvivalCurve& curve) {
  std::size_t m = curve.horizons.size();
  if (m < 4) throw std::invalid_argument("exponent fit needs >= 4 horizons");

  // drop the smallest decade when enough points remain
  double cutoff = curve.horizons.front() * 10.0;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < m; ++i)
    if (curve.horizons[i] >= cutoff) idx.push_back(i);
  if (idx.size() < 4) {
    idx.clear();
    for (std::size_t i = 0; i < m; ++i) idx.push_back(i);
  }

  std::vector<double> x, y, w;
  for (std::size_t i : idx) {
    double p = curve.estimates[i];
    if (!(p > 0.0))
      throw ZeroSurvivalError(
          "zero survival estimate in fit window; use importance sampling "
          "or fewer decades");
    x.push_back(std::log(curve.horizons[i]));
    y.push_back(std::log(p));
    double n = static_cast<double>(curve.n_paths[i]);
    double var = std::max((1.0 - p) / (n * p), 1e-12);
    w.push_back(1.0 / var);
  }
  WlsFit fit = weighted_least_squares(x, y, w);

  ExponentFit out;
  out.delta_hat = std::max(0.0, -fit.slope);
  out.std_error = fit.slope_stderr;
  out.window_lo = curve.horizons[idx.front()];
  out.window_hi = curve.horizons[idx.back()];
  out.points_used = static_cast<int>(idx.size());
  return out;
}

}  // namespace levy
