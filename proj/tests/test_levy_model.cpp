#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "levy/levy_model.hpp"
#include "levy/numerics.hpp"

using namespace levy;

TEST_CASE("validation accepts standard Brownian motion") {
  CHECK(validate_triplet(LevyTriplet::brownian(1.0)).empty());
}

TEST_CASE("validation flags a negative variance") {
  LevyTriplet t = LevyTriplet::brownian(-1.0);
  auto report = validate_triplet(t);
  REQUIRE_FALSE(report.empty());
  CHECK(report.front() == "sigma2 negative");
}

TEST_CASE("validation flags an atom at the origin") {
  LevyTriplet t;
  t.jumps.atoms.push_back({0.0, 1.0});
  auto report = validate_triplet(t);
  bool found = false;
  for (const auto& r : report)
    if (r == "atom at origin") found = true;
  CHECK(found);
}

TEST_CASE("validation flags the degenerate process unless explicitly zero") {
  LevyTriplet t;
  CHECK_FALSE(validate_triplet(t).empty());
  CHECK(validate_triplet(LevyTriplet::zero()).empty());
}

TEST_CASE("characteristic exponent of Brownian motion") {
  auto psi = char_exponent(LevyTriplet::brownian(1.0), 1.0);
  CHECK(psi.real() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(psi.imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("characteristic exponent vanishes at zero") {
  LevyTriplet t = LevyTriplet::brownian(2.0, -1.5);
  t.jumps.atoms.push_back({-0.5, 1.0});
  CHECK(std::abs(char_exponent(t, 0.0)) == 0.0);
}

TEST_CASE("unit atom at pi reduces to one compensated term") {
  LevyTriplet t;
  t.jumps.atoms.push_back({1.0, 1.0});
  auto psi = char_exponent(t, std::numbers::pi);
  CHECK(psi.real() == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(psi.imag() == doctest::Approx(-std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("exponent conjugation symmetry") {
  LevyTriplet t = LevyTriplet::brownian(0.7, 0.3);
  t.jumps.atoms.push_back({-0.5, 1.0});
  t.jumps.atoms.push_back({2.0, 0.25});
  t.jumps.stable = StablePart{1.5, 0.8, -0.4};
  for (double u : {0.1, 0.7, 1.9, 13.0}) {
    auto a = char_exponent(t, -u);
    auto b = std::conj(char_exponent(t, u));
    CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("exponent additivity across triplets") {
  LevyTriplet t1 = LevyTriplet::brownian(0.5, 0.2);
  t1.jumps.atoms.push_back({-0.5, 2.0});
  LevyTriplet t2 = LevyTriplet::brownian(1.5, -0.7);
  t2.jumps.atoms.push_back({1.5, 0.5});
  LevyTriplet sum = LevyTriplet::brownian(2.0, -0.5);
  sum.jumps.atoms.push_back({-0.5, 2.0});
  sum.jumps.atoms.push_back({1.5, 0.5});
  for (double u : {0.3, 1.0, 4.7}) {
    auto lhs = char_exponent(sum, u);
    auto rhs = char_exponent(t1, u) + char_exponent(t2, u);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
  }
}

TEST_CASE("martingale normalization strips a pure drift") {
  LevyTriplet t = martingale_normalize(LevyTriplet::brownian(1.0, 3.0));
  CHECK(t.drift == doctest::Approx(0.0));
  CHECK(t.sigma2 == 1.0);
}

TEST_CASE("martingale normalization zeroes the mean with atoms") {
  // an atom inside the truncation radius is already compensated by the
  // characteristic exponent convention; one outside shifts the mean
  LevyTriplet inside;
  inside.jumps.atoms.push_back({1.0, 2.0});
  CHECK(mean_at_unit_time(inside) == doctest::Approx(0.0));

  LevyTriplet outside;
  outside.jumps.atoms.push_back({1.5, 2.0});
  CHECK(mean_at_unit_time(outside) == doctest::Approx(3.0));
  LevyTriplet norm = martingale_normalize(outside);
  CHECK(norm.drift == doctest::Approx(-3.0));
  CHECK(mean_at_unit_time(norm) == doctest::Approx(0.0));
}

TEST_CASE("normalized atom triplets have flat exponent derivative at zero") {
  LevyTriplet t;
  t.drift = 0.4;
  t.jumps.atoms.push_back({-0.5, 1.0});
  t.jumps.atoms.push_back({1.7, 0.6});
  LevyTriplet norm = martingale_normalize(t);
  double h = 1e-6;
  auto d = (char_exponent(norm, h) - char_exponent(norm, -h)) / (2.0 * h);
  CHECK(std::abs(d) < 1e-4);
}

TEST_CASE("first moment absent for low-index stable part") {
  LevyTriplet t;
  t.jumps.stable = StablePart{0.8, 1.0, 0.0};
  CHECK_THROWS_WITH_AS(martingale_normalize(t), "first moment absent",
                       std::domain_error);
}

TEST_CASE("stable part with index above one keeps zero mean") {
  LevyTriplet t;
  t.jumps.stable = StablePart{1.5, 1.0, -1.0};
  CHECK(mean_at_unit_time(t) == doctest::Approx(0.0));
}

TEST_CASE("jump mass sign queries") {
  LevyTriplet t;
  t.jumps.atoms.push_back({-0.5, 1.0});
  CHECK(t.jumps.mass_negative() > 0.0);
  CHECK(t.jumps.mass_positive() == 0.0);
  t.jumps.stable = StablePart{1.5, 1.0, -1.0};  // spectrally negative
  CHECK(std::isinf(t.jumps.mass_negative()));
  CHECK(t.jumps.mass_positive() == 0.0);
}

TEST_CASE("triplet JSON round trip") {
  LevyTriplet t = LevyTriplet::brownian(0.3, -1.2);
  t.jumps.atoms.push_back({-0.5, 1.0});
  t.jumps.atoms.push_back({2.5, 0.125});
  t.jumps.stable = StablePart{1.25, 0.5, 0.75};
  t.jumps.density.push_back({0.25, 0.75, 2.0});
  LevyTriplet back = triplet_from_json(triplet_to_json(t));
  CHECK(back.sigma2 == t.sigma2);
  CHECK(back.drift == t.drift);
  REQUIRE(back.jumps.atoms.size() == 2);
  CHECK(back.jumps.atoms[1].x == 2.5);
  REQUIRE(back.jumps.stable.has_value());
  CHECK(back.jumps.stable->alpha == 1.25);
  REQUIRE(back.jumps.density.size() == 1);
  CHECK(back.jumps.density[0].value == 2.0);
  for (double u : {0.5, 2.0}) {
    CHECK(std::abs(char_exponent(back, u) - char_exponent(t, u)) == 0.0);
  }
}

TEST_CASE("density-part exponent agrees with direct quadrature") {
  // independent route: numerically integrate the compensated integrand
  // against the piecewise-constant density
  LevyTriplet t;
  t.jumps.density.push_back({-1.5, -0.25, 0.8});
  t.jumps.density.push_back({0.5, 2.0, 0.3});
  for (double u : {0.3, 1.0, 2.7}) {
    auto direct = char_exponent(t, u);
    double re = 0.0, im = 0.0;
    for (const auto& p : t.jumps.density) {
      auto fre = [&](double x) { return (std::cos(u * x) - 1.0) * p.value; };
      auto fim = [&](double x) {
        double comp = std::abs(x) <= 1.0 ? u * x : 0.0;
        return (std::sin(u * x) - comp) * p.value;
      };
      // split at the truncation radius so the integrands stay smooth
      for (double lo : {p.lo}) {
        double hi = p.hi;
        std::vector<double> cuts = {lo, -1.0, 1.0, hi};
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
          double a = std::max(lo, cuts[k]);
          double b = std::min(hi, cuts[k + 1]);
          if (b <= a) continue;
          re += adaptive_simpson(fre, a, b, 1e-13);
          im += adaptive_simpson(fim, a, b, 1e-13);
        }
      }
    }
    CHECK(direct.real() == doctest::Approx(re).epsilon(1e-9));
    CHECK(direct.imag() == doctest::Approx(im).epsilon(1e-9));
  }
}

TEST_CASE("char_exponent rejects an invalid triplet") {
  LevyTriplet t = LevyTriplet::brownian(-1.0);
  CHECK_THROWS_AS(char_exponent(t, 1.0), std::invalid_argument);
}
