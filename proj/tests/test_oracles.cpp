#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levy/oracles.hpp"
#include "levy/simulate.hpp"

using namespace levy;
using namespace levy::oracles;

TEST_CASE("reflection principle values") {
  CHECK(bm_no_exit_exact(1.0, 1.0, 1.0) ==
        doctest::Approx(0.6826894921370859).epsilon(1e-12));
  CHECK(bm_no_exit_exact(1.0, 4.0, 1.0) ==
        doctest::Approx(0.38292492254802624).epsilon(1e-12));
  CHECK(bm_no_exit_exact(1.0, 1.0, 1e12) < 1e-5);
  CHECK_THROWS_AS(bm_no_exit_exact(-1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("reflection principle monotonicity") {
  double prev = 1.0;
  for (double horizon : {0.5, 1.0, 2.0, 8.0, 64.0}) {
    double p = bm_no_exit_exact(1.0, 1.0, horizon);
    CHECK(p < prev);
    prev = p;
  }
  prev = 0.0;
  for (double a : {0.25, 0.75, 1.5, 4.0}) {
    double p = bm_no_exit_exact(a, 1.0, 2.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("stable positivity parameter") {
  CHECK(stable_rho(0.7, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stable_rho(1.5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stable_rho(1.5, -1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(stable_rho(1.5, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(stable_rho(1.0, 0.5), std::domain_error);
}

TEST_CASE("skew symmetry of the positivity parameter") {
  for (double alpha : {0.4, 0.9, 1.3, 1.8}) {
    for (double beta : {0.1, 0.5, 1.0}) {
      CHECK(stable_rho(alpha, beta) + stable_rho(alpha, -beta) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("positivity probes for Brownian motion") {
  auto probes =
      spitzer_rho_estimate(LevyTriplet::brownian(1.0), {1.0, 8.0}, 20000, 3);
  for (const auto& p : probes) {
    CHECK(p.ci_low <= 0.5);
    CHECK(p.ci_high >= 0.5);
  }
}

TEST_CASE("positivity probes approach the stable limit") {
  LevyTriplet t;
  t.jumps.stable = StablePart{1.5, 1.0, -1.0};
  auto probes = spitzer_rho_estimate(t, {16.0}, 50000, 4);
  double rho = stable_rho(1.5, -1.0);
  CHECK(probes[0].ci_low <= rho + 0.01);
  CHECK(probes[0].ci_high >= rho - 0.01);
}

TEST_CASE("positivity probes under positive drift approach one") {
  LevyTriplet t = LevyTriplet::brownian(1.0, 0.5);
  auto probes = spitzer_rho_estimate(t, {256.0}, 20000, 5);
  CHECK(probes[0].estimate > 0.95);
}

TEST_CASE("long-run falling-boundary estimate stays near its closed form") {
  // constant boundary: the growing grid with bridge correction still has
  // to reproduce the reflection principle
  double p = bm_no_exit_longrun(Boundary::constant(1.0), 64.0, 40000, 6);
  double exact = bm_no_exit_exact(1.0, 1.0, 64.0);
  CHECK(std::abs(p - exact) <= 0.01);
}

TEST_CASE("lemma battery passes at desk scale") {
  LemmaCheckConfig cfg;
  cfg.assoc_paths = 4000;
  cfg.window_paths = 4000;
  cfg.excursion_paths = 100000;
  cfg.floor_paths = 4000;
  LemmaChecksReport rep = lemma_checks(cfg);

  CHECK(rep.assoc.size() == 20);
  CHECK(rep.assoc_pass);

  REQUIRE(rep.decomposition.size() == 2);
  for (const auto& wc : rep.decomposition) {
    CHECK(wc.holds);
    CHECK(wc.p_shifted > 0.99);  // the shifted boundary is enormous
  }
  CHECK(rep.decomposition_pass);

  CHECK(rep.excursion_bound ==
        doctest::Approx(10.0 * std::exp(-std::pow(std::log(1024.0), 2.0) / 4.0))
            .epsilon(1e-12));
  CHECK(rep.excursion_freq == 0.0);
  CHECK(rep.excursion_pass);

  REQUIRE(rep.floor_estimates.size() == 9);
  CHECK(rep.floor_pass);
  CHECK(rep.all_pass());

  auto j = lemma_report_to_json(rep);
  CHECK(j.at("all_pass").get<bool>());
}

TEST_CASE("master calibration grid") {
  // the simulator against the reflection principle over an (a, T) grid
  SimConfig cfg;
  cfg.bridge_correction = true;
  std::uint64_t stream = 0;
  for (double a : {0.5, 2.0}) {
    for (double horizon : {2.0, 16.0}) {
      cfg.dt_max = 0.01 * std::sqrt(horizon);
      auto est = estimate_survival(LevyTriplet::brownian(1.0),
                                   Boundary::constant(a), horizon, 20000,
                                   cfg, 77, stream);
      stream += 20000;
      double exact = bm_no_exit_exact(a, 1.0, horizon);
      CHECK(std::abs(est.p - exact) <= 3.0 * est.std_error + 1e-9);
    }
  }
}
