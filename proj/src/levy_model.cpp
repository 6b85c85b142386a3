#include "levy/levy_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "levy/numerics.hpp"

namespace levy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double piece_len(const DensityPiece& p, double lo, double hi) {
  double a = std::max(p.lo, lo);
  double b = std::min(p.hi, hi);
  return b > a ? b - a : 0.0;
}

// int x g over the piece restricted to [lo, hi]
double piece_x_mass(const DensityPiece& p, double lo, double hi) {
  double a = std::max(p.lo, lo);
  double b = std::min(p.hi, hi);
  if (b <= a) return 0.0;
  return p.value * 0.5 * (b * b - a * a);
}

// int x^2 g over the piece restricted to [lo, hi]
double piece_x2_mass(const DensityPiece& p, double lo, double hi) {
  double a = std::max(p.lo, lo);
  double b = std::min(p.hi, hi);
  if (b <= a) return 0.0;
  return p.value * (b * b * b - a * a * a) / 3.0;
}
}  // namespace

double JumpMeasure::mass_negative() const {
  double m = 0.0;
  for (const auto& a : atoms)
    if (a.x < 0.0) m += a.rate;
  for (const auto& p : density) m += p.value * piece_len(p, -kInf, 0.0);
  if (stable && stable->skew < 1.0) return kInf;
  return m;
}

double JumpMeasure::mass_positive() const {
  double m = 0.0;
  for (const auto& a : atoms)
    if (a.x > 0.0) m += a.rate;
  for (const auto& p : density) m += p.value * piece_len(p, 0.0, kInf);
  if (stable && stable->skew > -1.0) return kInf;
  return m;
}

bool JumpMeasure::abs_moment_finite() const {
  if (stable && stable->alpha <= 1.0) return false;
  return true;
}

double JumpMeasure::tail_mean_excluding_stable() const {
  double m = 0.0;
  for (const auto& a : atoms)
    if (std::abs(a.x) > 1.0) m += a.rate * a.x;
  for (const auto& p : density) {
    m += piece_x_mass(p, 1.0, kInf);
    m += piece_x_mass(p, -kInf, -1.0);
  }
  return m;
}

double JumpMeasure::density_mass_outside(double eps) const {
  double m = 0.0;
  for (const auto& p : density) {
    m += p.value * piece_len(p, eps, kInf);
    m += p.value * piece_len(p, -kInf, -eps);
  }
  return m;
}

double JumpMeasure::density_x2_mass_inside(double eps) const {
  double m = 0.0;
  for (const auto& p : density) m += piece_x2_mass(p, -eps, eps);
  return m;
}

double JumpMeasure::density_mean_between(double eps) const {
  double m = 0.0;
  for (const auto& p : density) {
    m += piece_x_mass(p, eps, 1.0);
    m += piece_x_mass(p, -1.0, -eps);
  }
  return m;
}

ValidationReport validate_triplet(const LevyTriplet& t) {
  ValidationReport report;
  if (t.sigma2 < 0.0) report.push_back("sigma2 negative");
  if (!std::isfinite(t.sigma2) || !std::isfinite(t.drift))
    report.push_back("non-finite parameter");
  for (const auto& a : t.jumps.atoms) {
    if (a.x == 0.0) report.push_back("atom at origin");
    if (!(a.rate > 0.0)) report.push_back("atom rate nonpositive");
  }
  if (t.jumps.stable) {
    const auto& s = *t.jumps.stable;
    if (!(s.alpha > 0.0 && s.alpha < 2.0))
      report.push_back("stable alpha outside (0,2)");
    if (!(s.scale > 0.0)) report.push_back("stable scale nonpositive");
    if (s.skew < -1.0 || s.skew > 1.0)
      report.push_back("stable skew outside [-1,1]");
    if (s.alpha == 1.0 && s.skew != 0.0)
      report.push_back("stable alpha=1 requires skew=0");
  }
  for (const auto& p : t.jumps.density) {
    if (!(p.hi > p.lo)) report.push_back("density piece empty");
    if (p.value < 0.0) report.push_back("density value negative");
    if (p.lo < 0.0 && p.hi > 0.0)
      report.push_back("density piece straddles origin");
  }
  bool degenerate =
      t.sigma2 == 0.0 && t.drift == 0.0 && t.jumps.empty() && !t.explicit_zero;
  if (degenerate) report.push_back("degenerate process");
  return report;
}

void require_valid(const LevyTriplet& t) {
  auto report = validate_triplet(t);
  if (!report.empty())
    throw std::invalid_argument("invalid Levy triplet: " + report.front());
}

namespace {
std::complex<double> stable_exponent(const StablePart& s, double u) {
  if (u == 0.0) return {0.0, 0.0};
  double au = std::abs(u);
  double salpha = std::pow(s.scale, s.alpha) * std::pow(au, s.alpha);
  if (s.alpha == 1.0) return {-salpha, 0.0};
  double sgn = u > 0.0 ? 1.0 : -1.0;
  double skew_term =
      s.skew * sgn * std::tan(std::numbers::pi * s.alpha / 2.0);
  return {-salpha, salpha * skew_term};
}

// int (e^{iux} - 1 - 1_{|x|<=1} iux) g(x) dx on one piece, closed form.
std::complex<double> piece_exponent(const DensityPiece& p, double u) {
  using namespace std::complex_literals;
  auto primitive = [&](double a, double b,
                       bool compensate) -> std::complex<double> {
    if (b <= a) return {0.0, 0.0};
    // int_a^b (e^{iux} - 1) dx = (e^{iub} - e^{iua})/(iu) - (b - a)
    std::complex<double> val =
        (std::exp(1i * u * b) - std::exp(1i * u * a)) / (1i * u) - (b - a);
    if (compensate) val -= 1i * u * 0.5 * (b * b - a * a);
    return val;
  };
  double lo = p.lo, hi = p.hi;
  std::complex<double> total = {0.0, 0.0};
  // split at |x| = 1 so the compensation indicator is constant per segment
  auto segment = [&](double a, double b) {
    if (b <= a) return;
    bool inside = std::max(std::abs(a), std::abs(b)) <= 1.0 + 1e-15;
    total += primitive(a, b, inside);
  };
  if (hi <= 0.0) {
    segment(std::min(lo, -1.0), std::min(hi, -1.0));
    segment(std::max(lo, -1.0), hi);
  } else {
    segment(lo, std::min(hi, 1.0));
    segment(std::max(lo, 1.0), hi);
  }
  return p.value * total;
}
}  // namespace

std::complex<double> char_exponent(const LevyTriplet& t, double u) {
  require_valid(t);
  using namespace std::complex_literals;
  if (u == 0.0) return {0.0, 0.0};
  std::complex<double> psi = 1i * t.drift * u - 0.5 * t.sigma2 * u * u;
  for (const auto& a : t.jumps.atoms) {
    std::complex<double> term = std::exp(1i * u * a.x) - 1.0;
    if (std::abs(a.x) <= 1.0) term -= 1i * u * a.x;
    psi += a.rate * term;
  }
  for (const auto& p : t.jumps.density) psi += piece_exponent(p, u);
  if (t.jumps.stable) psi += stable_exponent(*t.jumps.stable, u);
  return psi;
}

double mean_at_unit_time(const LevyTriplet& t) {
  require_valid(t);
  if (!t.jumps.abs_moment_finite())
    throw std::domain_error("first moment absent");
  return t.drift + t.jumps.tail_mean_excluding_stable();
}

LevyTriplet martingale_normalize(const LevyTriplet& t) {
  LevyTriplet out = t;
  out.drift -= mean_at_unit_time(t);
  return out;
}

nlohmann::json triplet_to_json(const LevyTriplet& t) {
  nlohmann::json j;
  j["sigma2"] = t.sigma2;
  j["drift"] = t.drift;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : t.jumps.atoms) j["atoms"].push_back({a.x, a.rate});
  if (t.jumps.stable) {
    j["stable"] = {{"alpha", t.jumps.stable->alpha},
                   {"scale", t.jumps.stable->scale},
                   {"skew", t.jumps.stable->skew}};
  } else {
    j["stable"] = nullptr;
  }
  if (!t.jumps.density.empty()) {
    j["density"] = nlohmann::json::array();
    for (const auto& p : t.jumps.density)
      j["density"].push_back({p.lo, p.hi, p.value});
  }
  if (t.explicit_zero) j["zero"] = true;
  return j;
}

LevyTriplet triplet_from_json(const nlohmann::json& j) {
  LevyTriplet t;
  t.sigma2 = j.at("sigma2").get<double>();
  t.drift = j.at("drift").get<double>();
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms"))
      t.jumps.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
  }
  if (j.contains("stable") && !j.at("stable").is_null()) {
    StablePart s;
    s.alpha = j.at("stable").at("alpha").get<double>();
    s.scale = j.at("stable").at("scale").get<double>();
    s.skew = j.at("stable").at("skew").get<double>();
    t.jumps.stable = s;
  }
  if (j.contains("density")) {
    for (const auto& p : j.at("density"))
      t.jumps.density.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                 p.at(2).get<double>()});
  }
  if (j.value("zero", false)) t.explicit_zero = true;
  return t;
}

}  // namespace levy
