#include "levy/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levy/numerics.hpp"

namespace levy {

Boundary Boundary::constant(double value) {
  Boundary b;
  b.kind_ = BoundaryKind::constant;
  b.offset_ = value;
  b.eval_ = [value](double) { return value; };
  b.deriv_ = [](double) { return 0.0; };
  return b;
}

Boundary Boundary::power(double gamma, PowerSign sign, double offset) {
  if (gamma < 0.0) throw std::invalid_argument("power boundary: gamma < 0");
  Boundary b;
  b.kind_ = BoundaryKind::power;
  b.gamma_ = gamma;
  b.sign_ = sign;
  b.offset_ = offset;
  double s = sign == PowerSign::plus ? 1.0 : -1.0;
  b.eval_ = [gamma, s, offset](double t) {
    return offset + s * std::pow(t, gamma);
  };
  if (gamma == 0.0) {
    b.deriv_ = [](double) { return 0.0; };
  } else {
    b.deriv_ = [gamma, s](double t) {
      return s * gamma * std::pow(t, gamma - 1.0);
    };
  }
  return b;
}

Boundary Boundary::custom(std::function<double(double)> eval,
                          std::function<double(double)> deriv) {
  if (!eval || !deriv)
    throw std::invalid_argument("custom boundary needs eval and deriv");
  Boundary b;
  b.kind_ = BoundaryKind::custom;
  b.eval_ = std::move(eval);
  b.deriv_ = std::move(deriv);
  return b;
}

nlohmann::json Boundary::to_json() const {
  switch (kind_) {
    case BoundaryKind::constant:
      return {{"kind", "constant"}, {"value", offset_}};
    case BoundaryKind::power:
      return {{"kind", "power"},
              {"gamma", gamma_},
              {"sign", sign_ == PowerSign::plus ? "plus" : "minus"},
              {"offset", offset_}};
    default:
      throw std::domain_error("custom boundary is not serializable");
  }
}

Boundary Boundary::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("value").get<double>());
  if (kind == "power") {
    std::string sign = j.at("sign").get<std::string>();
    if (sign != "plus" && sign != "minus")
      throw std::invalid_argument("boundary sign must be plus or minus");
    return power(j.at("gamma").get<double>(),
                 sign == "plus" ? PowerSign::plus : PowerSign::minus,
                 j.at("offset").get<double>());
  }
  throw std::invalid_argument("unknown boundary kind: " + kind);
}

namespace {

// Doubling quadrature with a tail fit. The integrand is modelled as
// c t^p (ln t)^{-k} near the cap: local log-log slopes over the last two
// two-decade windows are extrapolated linearly in 1/ln t, which recovers p
// exactly for that family, and when p lands on the critical -1 the
// log-correction order k decides convergence (k > 1 integrates).
IntegralTestResult classify_integral(const std::function<double(double)>& f,
                                     double quad_upper) {
  constexpr double kRelTol = 1e-6;
  constexpr double kMargin = 0.02;
  double total = 0.0;
  double lo = 1.0;
  double hi = 2.0;
  double upper_reached = 1.0;
  while (lo < quad_upper) {
    hi = std::min(hi, quad_upper);
    double piece = adaptive_simpson(f, lo, hi, 1e-12 + 1e-9 * std::abs(total));
    total += piece;
    upper_reached = hi;
    if (std::abs(piece) < kRelTol * std::abs(total) && total != 0.0) {
      return {IntegralClass::finite, total};
    }
    lo = hi;
    hi *= 2.0;
  }
  double u = upper_reached;
  double f_hi = f(u);
  double f_mid = f(u / 100.0);
  double f_far = f(u / 10000.0);
  // nonnegative integrands only: a vanished tail means the integral is done
  if (f_hi == 0.0) return {IntegralClass::finite, total};
  if (f_hi < 0.0 || f_mid <= 0.0 || f_far <= 0.0)
    return {IntegralClass::inconclusive, total};

  double slope_near = std::log(f_hi / f_mid) / std::log(100.0);
  double slope_far = std::log(f_mid / f_far) / std::log(100.0);
  // geometric midpoints of the two fit windows, in 1/ln t
  double x_near = 1.0 / std::log(u / 10.0);
  double x_far = 1.0 / std::log(u / 1000.0);
  double k_hat = (slope_near - slope_far) / (x_far - x_near);
  double p_inf = slope_near + k_hat * x_near;

  if (p_inf < -1.0 - kMargin) {
    double tail = f_hi * u / (-slope_near - 1.0);
    return {IntegralClass::finite, total + tail};
  }
  if (p_inf > -1.0 + kMargin) return {IntegralClass::infinite, total};
  // critical power: the log order decides; thresholds leave room for the
  // second-order bias of the two-point drift estimate
  if (k_hat > 1.35) {
    double tail = f_hi * u * std::log(u) / (k_hat - 1.0);
    return {IntegralClass::finite, total + tail};
  }
  if (k_hat < 1.05) return {IntegralClass::infinite, total};
  return {IntegralClass::inconclusive, total};
}

}  // namespace

IntegralTestResult uchiyama_test(const Boundary& b, double quad_upper) {
  if (b.kind() == BoundaryKind::constant || b.kind() == BoundaryKind::power) {
    double gamma = b.kind() == BoundaryKind::power ? b.gamma() : 0.0;
    if (gamma >= 0.5) return {IntegralClass::infinite, 0.0};
    // |offset +/- t^gamma| <= |offset| + t^gamma termwise
    auto integrand = [&](double t) {
      return std::abs(b(t)) * std::pow(t, -1.5);
    };
    double value = adaptive_simpson(integrand, 1.0, 1e6, 1e-10);
    // closed-form tails: int_U^inf t^{gamma-3/2} and offset int_U^inf t^{-3/2}
    double u = 1e6;
    double tail = std::pow(u, gamma - 0.5) / (0.5 - gamma) +
                  std::abs(b.offset()) * 2.0 / std::sqrt(u);
    return {IntegralClass::finite, value + tail};
  }
  auto integrand = [&](double t) { return std::abs(b(t)) * std::pow(t, -1.5); };
  return classify_integral(integrand, quad_upper);
}

IntegralTestResult l2_derivative_test(const Boundary& b, double quad_upper) {
  if (b.kind() == BoundaryKind::constant) return {IntegralClass::finite, 0.0};
  if (b.kind() == BoundaryKind::power) {
    double gamma = b.gamma();
    if (gamma == 0.0) return {IntegralClass::finite, 0.0};
    if (gamma >= 0.5) return {IntegralClass::infinite, 0.0};
    // int_1^inf gamma^2 t^{2 gamma - 2} dt = gamma^2 / (1 - 2 gamma)
    return {IntegralClass::finite, gamma * gamma / (1.0 - 2.0 * gamma)};
  }
  auto integrand = [&](double s) {
    double d = b.deriv(s);
    return d * d;
  };
  return classify_integral(integrand, quad_upper);
}

GrowthReport growth_props(const Boundary& b, double horizon) {
  if (!(horizon > std::exp(1.0)))
    throw std::invalid_argument("growth_props: horizon must exceed e");
  constexpr int kPoints = 1200;
  std::vector<double> grid(kPoints);
  double lmax = std::log(horizon);
  for (int i = 0; i < kPoints; ++i)
    grid[i] = std::exp(lmax * static_cast<double>(i) / (kPoints - 1));

  GrowthReport rep;
  // prop1: sup f(t)/t attained away from the grid's trailing decade
  double sup_ratio = 0.0, sup_ratio_head = 0.0;
  for (double t : grid) {
    double r = b(t) / t;
    sup_ratio = std::max(sup_ratio, r);
    if (t <= horizon / 10.0) sup_ratio_head = std::max(sup_ratio_head, r);
  }
  rep.prop1_c = sup_ratio;
  rep.prop1_holds = sup_ratio <= sup_ratio_head * (1.0 + 1e-9) ||
                    sup_ratio <= 0.0;

  // prop2: sup over 1 <= t <= s <= T of sqrt(t) f'(s)
  double sup_pair = 0.0, sup_pair_head = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double sqrt_t = std::sqrt(grid[i]);
    for (std::size_t j = i; j < grid.size(); ++j) {
      double v = sqrt_t * b.deriv(grid[j]);
      sup_pair = std::max(sup_pair, v);
      if (grid[j] <= horizon / 10.0) sup_pair_head = std::max(sup_pair_head, v);
    }
  }
  rep.prop2_c = sup_pair;
  rep.prop2_holds = sup_pair <= sup_pair_head * (1.0 + 1e-9) || sup_pair <= 0.0;
  return rep;
}

IteratedBoundary::IteratedBoundary(Boundary base, double horizon,
                                   IterationVariant variant,
                                   double kappa_delta)
    : base_(std::move(base)),
      horizon_(horizon),
      log_horizon_(std::log(horizon)),
      variant_(variant),
      kappa_delta_(kappa_delta) {
  if (!(horizon > std::exp(1.0)))
    throw std::invalid_argument("iterated boundary: horizon must exceed e");
  if (variant == IterationVariant::negative_case && !(base_(0.0) < 1.0))
    throw std::invalid_argument("negative case requires f(0) < 1");
  if (kappa_delta < 0.0)
    throw std::invalid_argument("kappa_delta must be nonnegative");
}

double IteratedBoundary::anchor(int n) const {
  double lt = log_horizon_;
  if (n == 0) return base_(lt);
  if (variant_ == IterationVariant::negative_case) {
    // f_n(ln T) = n + f(ln T)
    return static_cast<double>(n) + base_(lt);
  }
  double lt5 = std::pow(lt, 5.0);
  return base_(lt) + n * kappa_delta_ * lt + n * lt5;
}

double IteratedBoundary::level(int n, double t) const {
  if (n < 0) throw std::invalid_argument("level index negative");
  if (n > 200) throw std::domain_error("iteration level exceeds 200");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  double lt = log_horizon_;
  double z = std::max(base_(lt), base_(t));  // f_0
  if (variant_ == IterationVariant::negative_case) {
    for (int k = 1; k <= n; ++k) {
      double a = anchor(k - 1);
      double excess = std::max(0.0, z - a);
      z = std::max(1.0, std::pow(excess, 2.0 / 3.0)) + a;
    }
    return z;
  }
  // positive case: the plateau value left of the anchor carries the
  // cumulative n kappa ln T + n (ln T)^5 shift; right of it each level adds
  // one kappa ln T step on top of the previous anchor.
  if (t <= lt || n == 0) return n == 0 ? z : anchor(n);
  double lt5 = std::pow(lt, 5.0);
  for (int k = 1; k <= n; ++k) {
    double a = anchor(k - 1);
    double excess = std::max(0.0, z - a);
    z = a + kappa_delta_ * lt + std::max(lt5, std::pow(excess, 0.75));
  }
  return z;
}

double IteratedBoundary::level_deriv(int n, double t) const {
  double h = 1e-5 * std::max(t, 1.0);
  double lo = std::max(0.0, t - h);
  return (level(n, t + h) - level(n, lo)) / (t + h - lo);
}

double IteratedBoundary::switch_point(int n) const {
  if (n < 1) throw std::invalid_argument("switch_point needs n >= 1");
  double lt = log_horizon_;
  double threshold = variant_ == IterationVariant::negative_case
                         ? 1.0
                         : std::pow(lt, 20.0 / 3.0);
  auto above = [&](double t) {
    return level(n - 1, t) - anchor(n - 1) > threshold;
  };
  double hi = std::max(horizon_, lt + 1.0);
  double growth_cap = 1e300;
  while (!above(hi) && hi < growth_cap) hi *= 2.0;
  if (!above(hi)) return hi;  // plateau never ends below the cap
  return bisect(above, lt, hi, 1e-9);
}

double iterate_boundary(const IteratedBoundary& ib, int n, double t) {
  return ib.level(n, t);
}

int iteration_count(IterationVariant variant, double kappa, double horizon) {
  double arg = kappa * horizon;
  if (!(arg > 0.0) || std::log(arg) < std::log(2.0) - 1e-12)
    throw std::domain_error("iteration_count: ln(kappa T) below ln 2");
  double ratio = std::log(arg) / std::log(2.0);
  double denom = variant == IterationVariant::negative_case
                     ? std::log(1.5)
                     : std::log(4.0 / 3.0);
  double n = std::ceil(std::log(ratio) / denom - 1e-12);
  return n < 0.0 ? 0 : static_cast<int>(n);
}

}  // namespace levy
