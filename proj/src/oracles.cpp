#include "levy/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "levy/numerics.hpp"
#include "levy/parallel.hpp"
#include "levy/simulate.hpp"

namespace levy::oracles {

double bm_no_exit_exact(double a, double sigma2, double horizon) {
  if (!(a > 0.0) || !(sigma2 > 0.0) || !(horizon > 0.0))
    throw std::domain_error("bm_no_exit_exact: a, sigma2, T must be positive");
  return 2.0 * norm_cdf(a / std::sqrt(sigma2 * horizon)) - 1.0;
}

double stable_rho(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::domain_error("stable_rho: alpha outside (0,2)");
  if (beta < -1.0 || beta > 1.0)
    throw std::domain_error("stable_rho: skew outside [-1,1]");
  if (alpha == 1.0 && beta != 0.0)
    throw std::domain_error("stable_rho: alpha=1 needs beta=0");
  double rho = 0.5 + std::atan(beta * std::tan(std::numbers::pi * alpha / 2.0)) /
                         (std::numbers::pi * alpha);
  return std::clamp(rho, 1e-12, 1.0 - 1e-12);
}

std::vector<RhoProbe> spitzer_rho_estimate(const LevyTriplet& t,
                                           const std::vector<double>& probes,
                                           std::uint64_t n_paths,
                                           std::uint64_t seed) {
  if (probes.empty()) throw std::invalid_argument("need at least one probe");
  require_valid(t);
  std::vector<RhoProbe> out;
  std::uint64_t stream_base = 0;
  for (double probe : probes) {
    SimConfig cfg;
    cfg.dt_max = probe;  // one cell: only the marginal at t = probe matters
    cfg.bridge_correction = false;
    std::vector<double> hits(n_paths);
    parallel_for(n_paths, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        PathSkeleton p =
            sample_path(t, probe, cfg, {seed, stream_base + i});
        hits[i] = p.values.back() > 0.0 ? 1.0 : 0.0;
      }
    });
    KahanSum sum;
    for (double h : hits) sum.add(h);
    RhoProbe rp;
    rp.t = probe;
    rp.estimate = sum.value() / static_cast<double>(n_paths);
    auto ci = wilson95(sum.value(), static_cast<double>(n_paths));
    rp.ci_low = ci.low;
    rp.ci_high = ci.high;
    out.push_back(rp);
    stream_base += n_paths;
  }
  return out;
}

double bm_no_exit_longrun(const Boundary& b, double horizon,
                          std::uint64_t n_paths, std::uint64_t seed) {
  // Brownian motion only; grid grows geometrically so that horizons like
  // (ln T)^21 stay tractable, and dead paths stop immediately.
  std::vector<double> hits(n_paths);
  parallel_for(n_paths, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      rng::Stream stream(seed, i, rng::Domain::base);
      double t = 0.0, x = 0.0, w = 1.0;
      if (0.0 > b(0.0)) {
        hits[i] = 0.0;
        continue;
      }
      bool alive = true;
      while (t < horizon && alive) {
        double dt = std::min(std::max(0.05, 0.02 * t), horizon - t);
        double v = t + dt;
        double xv = x + std::sqrt(dt) * stream.normal();
        double fv = b(v);
        if (xv > fv) {
          alive = false;
          break;
        }
        w *= 1.0 - std::exp(-2.0 * (b(t) - x) * (fv - xv) / dt);
        if (w == 0.0) {
          alive = false;
          break;
        }
        t = v;
        x = xv;
      }
      hits[i] = alive ? w : 0.0;
    }
  });
  KahanSum sum;
  for (double h : hits) sum.add(h);
  return sum.value() / static_cast<double>(n_paths);
}

LemmaChecksReport lemma_checks(const LemmaCheckConfig& cfg) {
  LemmaChecksReport rep;
  LevyTriplet bm = LevyTriplet::brownian(1.0);
  Boundary one = Boundary::constant(1.0);

  // (i) supermultiplicativity over adjacent windows, geometric split
  {
    rng::Stream gen(cfg.seed, 0, rng::Domain::aux);
    SimConfig sim;
    sim.dt_max = 0.1;
    rep.assoc_pass = true;
    std::uint64_t stream_base = 0;
    for (int trial = 0; trial < cfg.assoc_trials; ++trial) {
      AssocTrial tr;
      tr.a = 4.0 * gen.uniform01();
      tr.c = 16.0 * std::pow(16.0, gen.uniform01());  // in [16, 256]
      tr.b = std::sqrt(std::max(tr.a, 1.0) * tr.c);
      auto ac = estimate_no_exit_window(bm, one, tr.a, tr.c, cfg.assoc_paths,
                                        sim, cfg.seed, stream_base);
      auto ab = estimate_no_exit_window(bm, one, tr.a, tr.b, cfg.assoc_paths,
                                        sim, cfg.seed, stream_base + cfg.assoc_paths);
      auto bc = estimate_no_exit_window(bm, one, tr.b, tr.c, cfg.assoc_paths,
                                        sim, cfg.seed, stream_base + 2 * cfg.assoc_paths);
      stream_base += 3 * cfg.assoc_paths;
      tr.p_ac = ac.p;
      tr.p_ab = ab.p;
      tr.p_bc = bc.p;
      double se = std::sqrt(ac.std_error * ac.std_error +
                            std::pow(bc.p * ab.std_error, 2) +
                            std::pow(ab.p * bc.std_error, 2));
      tr.slack = tr.p_ac - tr.p_ab * tr.p_bc + 2.0 * se;
      tr.holds = tr.slack >= 0.0;
      if (!tr.holds) rep.assoc_pass = false;
      rep.assoc.push_back(tr);
    }
  }

  // (ii) decomposition with the increasing shifted boundary
  {
    rep.decomposition_pass = true;
    SimConfig sim;
    sim.dt_max = 0.05;
    for (double horizon : {64.0, 256.0}) {
      LemmaChecksReport::WindowCheck wc;
      wc.horizon = horizon;
      double lt = std::log(horizon);
      Boundary three = Boundary::constant(3.0);
      Boundary falling = Boundary::custom(
          [](double t) { return 3.0 - std::cbrt(t); },
          [](double t) {
            return t > 0.0 ? -1.0 / (3.0 * std::cbrt(t) * std::cbrt(t))
                           : 0.0;
          });
      Boundary shifted = Boundary::constant(3.0 + std::pow(lt, 6.0));
      double inner_horizon = std::pow(lt, 21.0);

      auto lhs = estimate_survival(bm, three, horizon, cfg.window_paths, sim,
                                   cfg.seed + 1);
      wc.lhs = lhs.p;
      wc.p_falling = bm_no_exit_longrun(falling, inner_horizon,
                                        cfg.window_paths, cfg.seed + 2);
      auto shifted_est = estimate_no_exit_window(
          bm, shifted, 1.0, horizon, cfg.window_paths, sim, cfg.seed + 3);
      wc.p_shifted = shifted_est.p;
      wc.rhs = 0.5 * wc.p_falling * wc.p_shifted;
      double se = 2.0 * (lhs.std_error + 0.5 * shifted_est.std_error);
      wc.holds = wc.lhs >= wc.rhs - se;
      if (!wc.holds) rep.decomposition_pass = false;
      rep.decomposition.push_back(wc);
    }
  }

  // (iii) Brownian excursion above max((ln T)^5, t^{3/4}) on [0, 2^10]
  {
    double horizon = 1024.0;
    double lt5 = std::pow(std::log(horizon), 5.0);
    std::vector<double> exceed(cfg.excursion_paths);
    parallel_for(cfg.excursion_paths, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        rng::Stream stream(cfg.seed + 4, i, rng::Domain::base);
        double x = 0.0;
        bool hit = false;
        double dt = 0.5;
        for (double t = dt; t <= horizon; t += dt) {
          x += std::sqrt(dt) * stream.normal();
          if (x > std::max(lt5, std::pow(t, 0.75))) {
            hit = true;
            break;
          }
        }
        exceed[i] = hit ? 1.0 : 0.0;
      }
    });
    KahanSum sum;
    for (double e : exceed) sum.add(e);
    rep.excursion_freq = sum.value() / static_cast<double>(cfg.excursion_paths);
    double lt = std::log(horizon);
    rep.excursion_bound = 10.0 * std::exp(-lt * lt / 4.0);
    rep.excursion_pass = rep.excursion_freq <= rep.excursion_bound;
  }

  // (iv) positive floor for the compensated Poisson martingale below t^0.6
  {
    LevyTriplet cp;
    cp.jumps.atoms.push_back({-1.0, 1.0});  // drift 0: compensated form
    Boundary pow06 = Boundary::power(0.6, PowerSign::plus, 0.0);
    SimConfig sim;
    sim.dt_max = 1.0;  // exact for piecewise-linear paths vs concave boundary
    std::uint64_t stream_base = 0;
    for (int k = 4; k <= 12; ++k) {
      double horizon = std::pow(2.0, k);
      auto est = estimate_no_exit_window(cp, pow06, 1.0, horizon,
                                         cfg.floor_paths, sim, cfg.seed + 5,
                                         stream_base);
      stream_base += cfg.floor_paths;
      rep.floor_horizons.push_back(horizon);
      rep.floor_estimates.push_back(est.p);
    }
    double first = rep.floor_estimates.front();
    double min_est =
        *std::min_element(rep.floor_estimates.begin(), rep.floor_estimates.end());
    rep.floor_pass = min_est >= 0.5 * first && min_est > 0.0;
  }

  return rep;
}

nlohmann::json lemma_report_to_json(const LemmaChecksReport& rep) {
  nlohmann::json j;
  j["association"] = nlohmann::json::array();
  for (const auto& tr : rep.assoc)
    j["association"].push_back({{"a", tr.a},
                                {"b", tr.b},
                                {"c", tr.c},
                                {"p_ac", tr.p_ac},
                                {"p_ab", tr.p_ab},
                                {"p_bc", tr.p_bc},
                                {"holds", tr.holds}});
  j["association_pass"] = rep.assoc_pass;
  j["decomposition"] = nlohmann::json::array();
  for (const auto& wc : rep.decomposition)
    j["decomposition"].push_back({{"T", wc.horizon},
                                  {"lhs", wc.lhs},
                                  {"p_falling", wc.p_falling},
                                  {"p_shifted", wc.p_shifted},
                                  {"rhs", wc.rhs},
                                  {"holds", wc.holds}});
  j["decomposition_pass"] = rep.decomposition_pass;
  j["excursion"] = {{"freq", rep.excursion_freq},
                    {"bound", rep.excursion_bound},
                    {"pass", rep.excursion_pass}};
  j["floor"] = {{"horizons", rep.floor_horizons},
                {"estimates", rep.floor_estimates},
                {"pass", rep.floor_pass}};
  j["all_pass"] = rep.all_pass();
  return j;
}

}  // namespace levy::oracles
