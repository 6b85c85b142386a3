#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace levy {

enum class BoundaryKind { constant, power, custom };
enum class PowerSign { plus, minus };

// Moving boundary f(t) on t >= 0 with its derivative. Power boundaries are
// f(t) = offset +/- t^gamma; custom boundaries supply both callables.
class Boundary {
 public:
  static Boundary constant(double value);
  static Boundary power(double gamma, PowerSign sign, double offset);
  static Boundary custom(std::function<double(double)> eval,
                         std::function<double(double)> deriv);

  double operator()(double t) const { return eval_(t); }
  double deriv(double t) const { return deriv_(t); }

  BoundaryKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  PowerSign sign() const { return sign_; }
  double offset() const { return offset_; }

  nlohmann::json to_json() const;
  static Boundary from_json(const nlohmann::json& j);

 private:
  Boundary() = default;
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
  BoundaryKind kind_ = BoundaryKind::custom;
  double gamma_ = 0.0;
  PowerSign sign_ = PowerSign::plus;
  double offset_ = 0.0;
};

enum class IntegralClass { finite, infinite, inconclusive };

struct IntegralTestResult {
  IntegralClass cls = IntegralClass::inconclusive;
  double value = 0.0;  // integral value when finite; value so far otherwise
};

// Classifies int_1^inf |f(t)| t^{-3/2} dt. Power boundaries in closed form
// (finite iff gamma < 1/2); custom boundaries by doubling adaptive Simpson
// up to quad_upper with a power-law tail fit over the last two decades.
IntegralTestResult uchiyama_test(const Boundary& b, double quad_upper = 1e8);

// Classifies int_1^inf f'(s)^2 ds in the same way.
IntegralTestResult l2_derivative_test(const Boundary& b,
                                      double quad_upper = 1e8);

struct GrowthReport {
  bool prop1_holds = false;
  double prop1_c = 0.0;  // witnessed sup of f(t)/t
  bool prop2_holds = false;
  double prop2_c = 0.0;  // witnessed sup of sqrt(t) f'(s), 1 <= t <= s <= T
};

// Certifies the linear-growth and derivative-decay bounds on a log-spaced
// grid of at least 10^3 points in [1, T].
GrowthReport growth_props(const Boundary& b, double horizon);

enum class IterationVariant { negative_case, positive_case };

// Level construction used by the proofs: the boundary is frozen left of the
// ln T anchor and its growth is taken to a fractional power level by level.
class IteratedBoundary {
 public:
  IteratedBoundary(Boundary base, double horizon, IterationVariant variant,
                   double kappa_delta = 1.0);

  double level(int n, double t) const;        // f_n(t)
  double level_deriv(int n, double t) const;  // central difference on f_n
  double anchor(int n) const;                 // f_n(ln T)
  // Where f_n leaves its plateau (found by bisection).
  double switch_point(int n) const;

  double horizon() const { return horizon_; }
  double log_horizon() const { return log_horizon_; }
  IterationVariant variant() const { return variant_; }
  const Boundary& base() const { return base_; }
  double kappa_delta() const { return kappa_delta_; }

 private:
  Boundary base_;
  double horizon_;
  double log_horizon_;
  IterationVariant variant_;
  double kappa_delta_;
};

double iterate_boundary(const IteratedBoundary& ib, int n, double t);

// Number of iteration steps n(T) = ceil(ln(ln(kappa T)/ln 2) / ln(3/2)) for
// the negative case; denominator ln(4/3) for the positive case.
int iteration_count(IterationVariant variant, double kappa, double horizon);

}  // namespace levy
