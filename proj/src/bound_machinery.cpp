#include "levy/bound_machinery.hpp"

#include <cmath>
#include <stdexcept>

#include "levy/numerics.hpp"
#include "levy/rng.hpp"

namespace levy::bounds {

void require_valid(const ProofConstants& pc) {
  if (!(pc.c1 > 0.0) || !(pc.c2 > 0.0))
    throw std::invalid_argument("proof constants must be positive");
  if (!(pc.beta > 0.0 && pc.beta < 1.0))
    throw std::invalid_argument("beta must lie in (0,1)");
  if (!(pc.l2_norm_sq > 0.0))
    throw std::invalid_argument("l2_norm_sq must be positive");
}

namespace {
void check_domain(double x) {
  if (!(x > 0.0 && x <= 1.0))
    throw std::domain_error("argument outside (0,1]");
}
}  // namespace

double log_H_negative(const ProofConstants& pc, double lx) {
  double l = pc.l2_norm_sq;
  return lx - std::sqrt(pc.c1 * l * std::max(0.0, -lx)) - pc.c2 * l;
}

double log_H_positive(const ProofConstants& pc, double lx) {
  double l = pc.l2_norm_sq;
  return lx + std::sqrt(pc.c1 * l * std::max(0.0, -lx));
}

double eval_H_negative(const ProofConstants& pc, double x) {
  require_valid(pc);
  check_domain(x);
  return std::exp(log_H_negative(pc, std::log(x)));
}

double eval_H_positive(const ProofConstants& pc, double x) {
  require_valid(pc);
  check_domain(x);
  return std::exp(log_H_positive(pc, std::log(x)));
}

IterateResult iterate_H(IterateVariant variant, const ProofConstants& pc,
                        int n, double x) {
  require_valid(pc);
  check_domain(x);
  if (n < 0) throw std::invalid_argument("iterate level negative");
  IterateResult res;
  double lx = std::log(x);
  if (variant == IterateVariant::beta_negative) {
    double lbeta = std::log(pc.beta);
    for (int k = 1; k <= n; ++k) {
      lx = log_H_negative(pc, lx + lbeta);  // argument x*beta stays in (0,1)
    }
    res.log_value = lx;
  } else {
    if (n < 1)
      throw std::invalid_argument("two_positive iterate starts at n = 1");
    constexpr double kLog2 = 0.6931471805599453;
    for (int k = 1; k <= n; ++k) {
      double arg = lx + kLog2;  // doubling may escape (0,1]
      if (arg > 0.0) {
        res.escaped = true;
        res.escape_level = k;
        res.log_value = arg;
        res.value = std::exp(arg);
        return res;
      }
      lx = log_H_positive(pc, arg);
    }
    res.log_value = lx;
  }
  res.value = std::exp(res.log_value);
  return res;
}

double iterate_H_value(IterateVariant variant, const ProofConstants& pc,
                       int n, double x) {
  IterateResult res = iterate_H(variant, pc, n, x);
  if (res.escaped)
    throw std::domain_error("iterate escaped (0,1] at level " +
                            std::to_string(res.escape_level));
  return res.value;
}

double log_W(const ProofConstants& pc, int n, double x) {
  return std::log(x) + n * std::log(pc.beta) -
         n * pc.c2 * pc.l2_norm_sq;
}

double log_Z(const ProofConstants& pc, int n, double x) {
  double l = pc.l2_norm_sq;
  double inner = std::log(1.0 / x) - 2.0 * std::log(pc.beta);
  double root = std::sqrt(pc.c1 * l * std::pow(2.0, n - 2) * inner);
  return (n - 1) * root - pc.c2 * l;
}

double h_square_threshold_analytic(const ProofConstants& pc) {
  double l = pc.l2_norm_sq;
  double su = 0.5 * (std::sqrt(pc.c1 * l) +
                     std::sqrt(pc.c1 * l + 4.0 * pc.c2 * l));
  return std::exp(-su * su);
}

double tilt_cost_g(double u) {
  if (u < 0.0) throw std::domain_error("tilt_cost_g: u must be >= 0");
  return (1.0 + u) * std::log1p(u) - u;
}

namespace {

struct ValidityCheck {
  bool valid = false;
};

// beta_negative induction needs the H(y) >= y^2 step at the first argument
// x*beta; deeper iterates only shrink, so that is the binding condition.
bool indi_valid(const ProofConstants& pc, int n, double x) {
  if (n <= 1) return true;
  return x * pc.beta <= h_square_threshold_analytic(pc);
}

// two_positive induction needs H_pos monotone at every doubled argument and
// every bound-sequence argument, i.e. all of them below e^{-c1 L / 4} and 1.
bool induct_valid(const ProofConstants& pc, int n, double x) {
  double l = pc.l2_norm_sq;
  double log_cap = std::min(0.0, -pc.c1 * l / 4.0);
  double lx = std::log(x);
  constexpr double kLog2 = 0.6931471805599453;
  double root = std::sqrt(pc.c1 * l * std::max(0.0, -lx));
  // bound sequence w_k = 2^k x exp((k-1) sqrt(c1 L ln(1/x)))
  for (int k = 1; k <= n; ++k) {
    double lw = k * kLog2 + lx + (k - 1) * root;
    if (lw > log_cap) return false;
  }
  // actual iterates
  double cur = lx;
  for (int k = 1; k <= n; ++k) {
    double arg = cur + kLog2;
    if (arg > log_cap) return false;
    cur = log_H_positive(pc, arg);
  }
  return true;
}

}  // namespace

InequalityReport verify_inequalities(const ProofConstants& pc,
                                     std::uint64_t samples_per_variant,
                                     int max_level, std::uint64_t seed) {
  require_valid(pc);
  InequalityReport rep;
  double l = pc.l2_norm_sq;

  // crossover of H_neg(x) >= x^2, located by bisection; the predicate is
  // monotone since ln H - 2 ln x = -ln x - sqrt(c1 L ln(1/x)) - c2 L
  auto below = [&](double x) {
    return log_H_negative(pc, std::log(x)) >= 2.0 * std::log(x);
  };
  if (below(1.0 - 1e-15)) {
    rep.h_square_threshold = 1.0;
  } else {
    auto above = [&](double x) { return !below(x); };
    rep.h_square_threshold = bisect(above, 1e-30, 1.0, 1e-12);
  }

  rng::Stream gen(seed, 0);
  for (int variant = 0; variant < 2; ++variant) {
    for (std::uint64_t i = 0; i < samples_per_variant; ++i) {
      int n = 1 + static_cast<int>(gen.next_u64() % max_level);
      double lx = -(1e-3 + 27.0 * gen.uniform01());  // x in ~(2e-12, 1)
      double x = std::exp(lx);
      ++rep.checked;
      if (variant == 0) {
        IterateResult it =
            iterate_H(IterateVariant::beta_negative, pc, n, x);
        double lw = log_W(pc, n, x);
        double lz = log_Z(pc, n, x);
        double log_rhs =
            lw - n * std::sqrt(pc.c1 * l * std::max(0.0, lz - lw));
        InequalityWitness w{n, x, it.log_value, log_rhs};
        double slack = 1e-9 * (1.0 + std::abs(log_rhs));
        if (!indi_valid(pc, n, x)) {
          if (it.log_value < log_rhs - slack) rep.out_of_validity.push_back(w);
        } else if (it.log_value < log_rhs - slack) {
          rep.violations.push_back(w);
        }
      } else {
        IterateResult it = iterate_H(IterateVariant::two_positive, pc, n, x);
        double root = std::sqrt(pc.c1 * l * std::max(0.0, -lx));
        double log_rhs = n * std::log(2.0) + lx + n * root;
        InequalityWitness w{n, x, it.log_value, log_rhs};
        double slack = 1e-9 * (1.0 + std::abs(log_rhs));
        if (it.escaped || !induct_valid(pc, n, x)) {
          if (it.log_value > log_rhs + slack) rep.out_of_validity.push_back(w);
        } else if (it.log_value > log_rhs + slack) {
          rep.violations.push_back(w);
        }
      }
    }
  }
  return rep;
}

nlohmann::json inequality_report_to_json(const InequalityReport& rep) {
  nlohmann::json j;
  j["checked"] = rep.checked;
  j["h_square_threshold"] = rep.h_square_threshold;
  auto dump = [](const std::vector<InequalityWitness>& ws) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : ws)
      arr.push_back({{"n", w.n},
                     {"x", w.x},
                     {"lhs", w.log_lhs},
                     {"rhs", w.log_rhs}});
    return arr;
  };
  j["violations"] = dump(rep.violations);
  j["out_of_validity"] = dump(rep.out_of_validity);
  return j;
}

int iterated_log_star(double horizon) {
  if (!(horizon > 0.0))
    throw std::domain_error("iterated_log_star: horizon must be positive");
  int k = 0;
  double t = horizon;
  while (t > 1.0) {
    t = std::log(t);
    ++k;
  }
  return k;
}

}  // namespace levy::bounds
