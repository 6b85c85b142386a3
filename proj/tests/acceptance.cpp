// Acceptance suite: one line per criterion, nonzero exit iff a gated
// criterion fails. Tolerances are fixed here, not tuned at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "levy/bound_machinery.hpp"
#include "levy/boundary.hpp"
#include "levy/levy_model.hpp"
#include "levy/numerics.hpp"
#include "levy/oracles.hpp"
#include "levy/passage_mc.hpp"
#include "levy/simulate.hpp"
#include "levy/tilt_is.hpp"

using namespace levy;

namespace {

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& detail,
            bool gating = true) {
  const char* tag = gating ? (pass ? "PASS" : "FAIL") : "REPORT";
  std::printf("%-4s %-6s %s\n", id.c_str(), tag, detail.c_str());
  std::fflush(stdout);
  if (gating && !pass) ++g_failures;
}

SimConfig sim_cfg(double dt, bool bridge = true) {
  SimConfig cfg;
  cfg.dt_max = dt;
  cfg.bridge_correction = bridge;
  return cfg;
}

// dyadic survival curve 2^k_lo .. 2^k_hi with step dt_coeff * sqrt(T)
SurvivalCurve dyadic_curve(const LevyTriplet& proc, const Boundary& b,
                           int k_lo, int k_hi, std::uint64_t n_paths,
                           double dt_coeff, std::uint64_t seed) {
  SurvivalCurve curve;
  std::uint64_t stream = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    double horizon = std::pow(2.0, k);
    auto est = estimate_survival(proc, b, horizon, n_paths,
                                 sim_cfg(dt_coeff * std::sqrt(horizon)),
                                 seed, stream);
    stream += n_paths;
    curve.horizons.push_back(horizon);
    curve.estimates.push_back(est.p);
    curve.ci_low.push_back(est.ci_low);
    curve.ci_high.push_back(est.ci_high);
    curve.std_errors.push_back(est.std_error);
    curve.n_paths.push_back(est.n_paths);
  }
  return curve;
}

char buf[512];

void a1_bm_calibration() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (double horizon : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    auto est = estimate_survival(LevyTriplet::brownian(1.0),
                                 Boundary::constant(1.0), horizon, 100000,
                                 sim_cfg(0.01 * std::sqrt(horizon)), 101,
                                 stream);
    stream += 100000;
    double exact = oracles::bm_no_exit_exact(1.0, 1.0, horizon);
    double dev = std::abs(est.p - exact) / est.std_error;
    worst = std::max(worst, dev);
    if (dev > 3.0) pass = false;
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  if (secs > 300.0) pass = false;
  std::snprintf(buf, sizeof(buf),
                "BM constant-boundary calibration: worst deviation %.2f SE "
                "(limit 3), wall %.1f s (limit 300)",
                worst, secs);
  report("A1", pass, buf);
}

void a2_constant_exponent() {
  SurvivalCurve curve =
      dyadic_curve(LevyTriplet::brownian(1.0), Boundary::constant(1.0), 4,
                   12, 100000, 0.01, 102);
  ExponentFit fit = fit_exponent(curve);
  bool pass = fit.delta_hat >= 0.45 && fit.delta_hat <= 0.55;
  std::snprintf(buf, sizeof(buf),
                "BM constant-boundary exponent: delta_hat = %.4f +- %.4f "
                "(required [0.45, 0.55])",
                fit.delta_hat, fit.std_error);
  report("A2", pass, buf);
}

void a3_negative_boundary() {
  LevyTriplet proc = LevyTriplet::brownian(1.0);
  proc.jumps.atoms.push_back({-0.5, 1.0});
  proc = martingale_normalize(proc);
  ExponentFit flat = fit_exponent(
      dyadic_curve(proc, Boundary::constant(1.0), 4, 12, 100000, 0.02, 103));
  ExponentFit moving = fit_exponent(dyadic_curve(
      proc, Boundary::power(0.25, PowerSign::minus, 1.0), 4, 12, 100000,
      0.02, 104));
  double gap = std::abs(moving.delta_hat - flat.delta_hat);
  double combined = std::hypot(moving.std_error, flat.std_error);
  bool pass =
      gap <= 0.08 && moving.delta_hat >= flat.delta_hat - 2.0 * combined;
  std::snprintf(buf, sizeof(buf),
                "falling boundary 1-t^0.25 keeps the exponent: "
                "delta(moving) = %.4f +- %.4f, delta(const) = %.4f +- %.4f, "
                "gap = %.4f (limit 0.08)",
                moving.delta_hat, moving.std_error, flat.delta_hat,
                flat.std_error, gap);
  report("A3", pass, buf);
}

void a4_positive_boundary() {
  LevyTriplet proc = LevyTriplet::brownian(1.0);
  proc.jumps.atoms.push_back({-0.5, 1.0});
  proc.jumps.atoms.push_back({0.5, 1.0});
  proc = martingale_normalize(proc);
  ExponentFit flat = fit_exponent(
      dyadic_curve(proc, Boundary::constant(1.0), 4, 12, 100000, 0.02, 105));
  ExponentFit moving = fit_exponent(dyadic_curve(
      proc, Boundary::power(0.25, PowerSign::plus, 1.0), 4, 12, 100000,
      0.02, 106));
  double gap = std::abs(moving.delta_hat - flat.delta_hat);
  double combined = std::hypot(moving.std_error, flat.std_error);
  bool pass =
      gap <= 0.08 && moving.delta_hat <= flat.delta_hat + 2.0 * combined;
  std::snprintf(buf, sizeof(buf),
                "rising boundary 1+t^0.25 keeps the exponent: "
                "delta(moving) = %.4f +- %.4f, delta(const) = %.4f +- %.4f, "
                "gap = %.4f (limit 0.08)",
                moving.delta_hat, moving.std_error, flat.delta_hat,
                flat.std_error, gap);
  report("A4", pass, buf);
}

void a5_contrast_regime() {
  ExponentFit fit = fit_exponent(dyadic_curve(
      LevyTriplet::brownian(1.0),
      Boundary::power(0.75, PowerSign::plus, 1.0), 4, 12, 100000, 0.02,
      107));
  bool observed = fit.delta_hat < 0.35;
  std::snprintf(buf, sizeof(buf),
                "gamma = 0.75 > 1/2 changes the Brownian exponent: "
                "delta_hat = %.4f (expected < 0.35) -- %sobserved",
                fit.delta_hat, observed ? "" : "NOT ");
  report("A5", observed, buf, /*gating=*/false);
}

void a6_stable_exponent() {
  // sigma = 0: no bridge correction exists, so the discrete-max bias is
  // controlled by keeping the step constant across horizons (the walk's
  // barrier-in-step-units is then fixed and the log-log slope is clean)
  LevyTriplet proc;
  proc.jumps.stable = StablePart{1.5, 1.0, -1.0};
  SurvivalCurve curve;
  std::uint64_t stream = 0;
  for (int k = 4; k <= 12; ++k) {
    double horizon = std::pow(2.0, k);
    auto est = estimate_survival(proc, Boundary::constant(1.0), horizon,
                                 100000, sim_cfg(1.0), 108, stream);
    stream += 100000;
    curve.horizons.push_back(horizon);
    curve.estimates.push_back(est.p);
    curve.ci_low.push_back(est.ci_low);
    curve.ci_high.push_back(est.ci_high);
    curve.std_errors.push_back(est.std_error);
    curve.n_paths.push_back(est.n_paths);
  }
  ExponentFit fit = fit_exponent(curve);
  double rho = oracles::stable_rho(1.5, -1.0);
  double gap = std::abs(fit.delta_hat - rho);
  bool pass = gap <= 0.08;
  std::snprintf(buf, sizeof(buf),
                "spectrally negative stable exponent: delta_hat = %.4f +- "
                "%.4f, rho = %.4f, gap = %.4f (limit 0.08)",
                fit.delta_hat, fit.std_error, rho, gap);
  report("A6", pass, buf);
}

void a7_girsanov_suite() {
  bool pass = true;
  std::string detail = "Girsanov suite:";

  struct Pair {
    LevyTriplet proc;
    Boundary barrier;
    TiltSide side;
  };
  std::vector<Pair> pairs;
  {
    LevyTriplet p1;
    p1.sigma2 = 1.0;
    p1.jumps.atoms.push_back({-0.5, 1.0});
    pairs.push_back({p1, Boundary::power(0.25, PowerSign::minus, 1.0),
                     TiltSide::negative});
    LevyTriplet p2;
    p2.jumps.atoms.push_back({-0.5, 1.0});
    p2.jumps.atoms.push_back({0.5, 1.0});
    pairs.push_back({p2, Boundary::power(0.25, PowerSign::plus, 1.0),
                     TiltSide::positive});
    LevyTriplet p3;
    p3.jumps.atoms.push_back({-0.25, 4.0});
    pairs.push_back({p3, Boundary::power(0.4, PowerSign::minus, 2.0),
                     TiltSide::negative});
  }
  // unit expectation of exp(log_weight) over 1e4 tilted paths per pair
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    TiltSpec spec =
        make_tilt(pairs[k].proc, pairs[k].barrier, pairs[k].side);
    KahanSum sum, sq;
    const std::uint64_t n = 10000;
    for (std::uint64_t i = 0; i < n; ++i) {
      WeightedSample ws = sample_tilted_path(pairs[k].proc, spec, 16.0,
                                             sim_cfg(0.25), {200 + k, i});
      double w = std::exp(ws.log_weight);
      sum.add(w);
      sq.add(w * w);
    }
    double mean = sum.value() / n;
    double se = std::sqrt((sq.value() / n - mean * mean) / n);
    double dev = std::abs(mean - 1.0) / se;
    if (dev > 3.0) pass = false;
    char item[96];
    std::snprintf(item, sizeof(item), " E[W]_%zu = %.4f (%.1f SE);", k + 1,
                  mean, dev);
    detail += item;
  }

  // zero tilt reproduces the crude estimator exactly under shared seeds
  {
    LevyTriplet proc = pairs[0].proc;
    Boundary flat = Boundary::constant(1.0);
    TiltSpec spec = make_tilt(proc, flat, TiltSide::negative);
    auto crude =
        estimate_survival(proc, flat, 8.0, 5000, sim_cfg(0.1), 210);
    auto is =
        is_estimate_survival(proc, flat, spec, 8.0, 5000, sim_cfg(0.1), 210);
    bool equal = is.est.p == crude.p;
    if (!equal) pass = false;
    char item[96];
    std::snprintf(item, sizeof(item), " zero-tilt bit-equal: %s;",
                  equal ? "yes" : "NO");
    detail += item;
  }

  // importance and crude intervals overlap at T = 64
  {
    LevyTriplet proc = pairs[0].proc;
    Boundary barrier = pairs[0].barrier;
    double horizon = 64.0;
    TiltSpec spec =
        make_tilt(proc, barrier, TiltSide::negative, std::log(horizon));
    auto crude = estimate_survival(proc, barrier, horizon, 10000,
                                   sim_cfg(0.08), 211);
    auto is = is_estimate_survival(proc, barrier, spec, horizon, 10000,
                                   sim_cfg(0.08), 212);
    bool overlap =
        is.est.ci_low <= crude.ci_high && crude.ci_low <= is.est.ci_high;
    if (!overlap) pass = false;
    char item[128];
    std::snprintf(item, sizeof(item),
                  " CI overlap at T=64: crude [%.4f,%.4f] vs IS [%.4f,%.4f]",
                  crude.ci_low, crude.ci_high, is.est.ci_low,
                  is.est.ci_high);
    detail += item;
  }
  report("A7", pass, detail);
}

void a8_lemma_battery() {
  oracles::LemmaCheckConfig cfg;
  cfg.assoc_paths = 10000;
  cfg.window_paths = 10000;
  cfg.excursion_paths = 100000;
  cfg.floor_paths = 10000;
  oracles::LemmaChecksReport rep = oracles::lemma_checks(cfg);
  int assoc_viol = 0;
  for (const auto& tr : rep.assoc)
    if (!tr.holds) ++assoc_viol;
  std::snprintf(buf, sizeof(buf),
                "lemma battery: association violations %d/20, decomposition "
                "%s, excursion freq %.2g vs bound %.2g (%s), floor min %.4f "
                "vs half-first %.4f (%s)",
                assoc_viol, rep.decomposition_pass ? "holds" : "FAILS",
                rep.excursion_freq, rep.excursion_bound,
                rep.excursion_pass ? "holds" : "FAILS",
                *std::min_element(rep.floor_estimates.begin(),
                                  rep.floor_estimates.end()),
                0.5 * rep.floor_estimates.front(),
                rep.floor_pass ? "holds" : "FAILS");
  report("A8", rep.all_pass(), buf);
}

void a9_bound_machinery() {
  bounds::ProofConstants pc;
  pc.c1 = 1.0;
  pc.c2 = 1.0;
  pc.beta = 0.5;
  pc.l2_norm_sq =
      l2_derivative_test(Boundary::power(0.25, PowerSign::plus, 0.0)).value;
  auto rep = bounds::verify_inequalities(pc, 1000, 30, 901);
  bool counts =
      iteration_count(IterationVariant::negative_case, 1.0, 65536.0) == 7 &&
      iteration_count(IterationVariant::positive_case, 1.0, 65536.0) == 10 &&
      iteration_count(IterationVariant::negative_case, 1.0, 1e6) == 8 &&
      iteration_count(IterationVariant::positive_case, 1.0, 1e6) == 11 &&
      bounds::iterated_log_star(65536.0) == 3 &&
      bounds::iterated_log_star(1e6) == 3;
  bool pass = rep.violations.empty() && counts;
  std::snprintf(buf, sizeof(buf),
                "bound machinery: %llu samples, %zu violations inside "
                "validity, %zu out-of-validity flagged; iteration counts "
                "and log-star %s hand values",
                static_cast<unsigned long long>(rep.checked),
                rep.violations.size(), rep.out_of_validity.size(),
                counts ? "match" : "MISMATCH");
  report("A9", pass, buf);
}

void a10_classifiers() {
  bool pass = true;
  for (double gamma : {0.0, 0.25, 0.49, 0.5, 0.75}) {
    Boundary b = Boundary::power(gamma, PowerSign::plus, 0.0);
    bool want_finite = gamma < 0.5;
    if ((uchiyama_test(b).cls == IntegralClass::finite) != want_finite)
      pass = false;
    if ((l2_derivative_test(b).cls == IntegralClass::finite) != want_finite)
      pass = false;
  }
  double quarter =
      l2_derivative_test(Boundary::power(0.25, PowerSign::plus, 0.0)).value;
  if (std::abs(quarter - 0.125) > 1e-12) pass = false;
  std::snprintf(buf, sizeof(buf),
                "integral classifiers: finite iff gamma < 1/2 over "
                "{0, 0.25, 0.49, 0.5, 0.75}; L2 value at 0.25 = %.6f "
                "(expected 0.125)",
                quarter);
  report("A10", pass, buf);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  a1_bm_calibration();
  a2_constant_exponent();
  a3_negative_boundary();
  a4_positive_boundary();
  a5_contrast_regime();
  a6_stable_exponent();
  a7_girsanov_suite();
  a8_lemma_battery();
  a9_bound_machinery();
  a10_classifiers();
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("---- %d gated failure(s), wall %.1f s\n", g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
