#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace levy {

// One finite-activity point mass of the jump measure: rate `rate` of jumps
// of size `x`.
struct JumpAtom {
  double x = 0.0;
  double rate = 0.0;
};

// Strictly stable jump component, Samorodnitsky-Taqqu parametrization
// S_alpha(scale, skew). Its characteristic exponent enters in closed form,
// so the component carries no separate truncation drift.
struct StablePart {
  double alpha = 1.5;
  double scale = 1.0;
  double skew = 0.0;
};

// Piecewise-constant jump density g(x) = value on [lo, hi). Pieces are
// bounded and must not touch x = 0, so all the usual integrals are finite
// sums of closed forms.
struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

struct JumpMeasure {
  std::vector<JumpAtom> atoms;
  std::optional<StablePart> stable;
  std::vector<DensityPiece> density;

  bool empty() const { return atoms.empty() && !stable && density.empty(); }

  // nu(R-) and nu(R+); infinite for a stable component with mass on that side.
  double mass_negative() const;
  double mass_positive() const;

  // True when int (|x| ^ x^2) nu(dx) < infinity (stable needs alpha > 1).
  bool abs_moment_finite() const;

  // int_{|x|>1} x nu(dx) over atoms and density pieces. The stable part is
  // strictly stable and contributes mean zero when alpha > 1.
  double tail_mean_excluding_stable() const;

  // Density-part helpers, all restricted to the piecewise component.
  double density_mass_outside(double eps) const;       // int_{|x|>=eps} g
  double density_x2_mass_inside(double eps) const;     // int_{|x|<eps} x^2 g
  double density_mean_between(double eps) const;       // int_{eps<=|x|<=1} x g
};

// Generating triplet (sigma^2, b, nu) with the |x| <= 1 truncation
// convention for the drift b.
struct LevyTriplet {
  double sigma2 = 0.0;
  double drift = 0.0;
  JumpMeasure jumps;
  bool explicit_zero = false;

  static LevyTriplet zero() {
    LevyTriplet t;
    t.explicit_zero = true;
    return t;
  }
  static LevyTriplet brownian(double sigma2, double drift = 0.0) {
    LevyTriplet t;
    t.sigma2 = sigma2;
    t.drift = drift;
    return t;
  }
};

using ValidationReport = std::vector<std::string>;

// Lists every violated admissibility condition; empty means admissible.
ValidationReport validate_triplet(const LevyTriplet& t);
void require_valid(const LevyTriplet& t);

// Characteristic exponent Psi(u) = ibu - sigma^2 u^2 / 2
//   + int (e^{iux} - 1 - 1_{|x|<=1} iux) nu(dx),
// with the stable component contributing its closed-form exponent.
std::complex<double> char_exponent(const LevyTriplet& t, double u);

// E X(1) under the triplet conventions above. Throws when the first moment
// is absent (stable alpha <= 1).
double mean_at_unit_time(const LevyTriplet& t);

// Drift-adjusted copy with E X(1) = 0; Gaussian and jump parts unchanged.
LevyTriplet martingale_normalize(const LevyTriplet& t);

nlohmann::json triplet_to_json(const LevyTriplet& t);
LevyTriplet triplet_from_json(const nlohmann::json& j);

}  // namespace levy
