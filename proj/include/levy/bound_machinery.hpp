#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace levy::bounds {

// Free constants of the proof machinery. The source analysis never pins
// them numerically, so they are parameters with neutral defaults.
struct ProofConstants {
  double c1 = 1.0;
  double c2 = 1.0;
  double beta = 0.5;         // in (0,1)
  double l2_norm_sq = 1.0;   // ||f'||^2_{L2[1, inf)}
};

void require_valid(const ProofConstants& pc);

// H(x) = x exp(-sqrt(c1 L ln(1/x)) - c2 L) on (0,1], L the L2 norm squared.
double eval_H_negative(const ProofConstants& pc, double x);
// H(x) = x exp(+sqrt(c1 L ln(1/x))) on (0,1].
double eval_H_positive(const ProofConstants& pc, double x);

// Log-domain versions; lx = ln x, return ln H(x). These stay finite far
// past the double underflow range.
double log_H_negative(const ProofConstants& pc, double lx);
double log_H_positive(const ProofConstants& pc, double lx);

enum class IterateVariant { beta_negative, two_positive };

struct IterateResult {
  bool escaped = false;
  int escape_level = 0;   // first level whose argument left (0,1]
  double log_value = 0.0; // ln of the iterate when not escaped
  double value = 0.0;     // exp(log_value), 0 if underflowed
};

// beta_negative: n-fold application of x -> H_neg(beta x), identity at n=0.
// two_positive: v_1 = H_pos(2x), v_k = H_pos(2 v_{k-1}); defined for n >= 1.
IterateResult iterate_H(IterateVariant variant, const ProofConstants& pc,
                        int n, double x);
double iterate_H_value(IterateVariant variant, const ProofConstants& pc,
                       int n, double x);

struct InequalityWitness {
  int n = 0;
  double x = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
};

struct InequalityReport {
  std::uint64_t checked = 0;
  std::vector<InequalityWitness> violations;
  std::vector<InequalityWitness> out_of_validity;
  // empirically located largest x with H_neg(x) >= x^2 (bisection)
  double h_square_threshold = 0.0;
};

// Samples (n, x) pairs per variant and checks the two induction
// inequalities of the iteration analysis:
//   beta_negative: H^n(x) >= W_n(x) exp(-n sqrt(c1 L ln(Z_n(x)/W_n(x))))
//   two_positive:  v_n(x) <= 2^n x exp(n sqrt(c1 L ln(1/x)))
// Points outside the (empirically determined) validity region are reported
// separately, never counted as violations.
InequalityReport verify_inequalities(const ProofConstants& pc,
                                     std::uint64_t samples_per_variant,
                                     int max_level, std::uint64_t seed);

nlohmann::json inequality_report_to_json(const InequalityReport& rep);

// ln W_n and ln Z_n of the beta_negative induction.
double log_W(const ProofConstants& pc, int n, double x);
double log_Z(const ProofConstants& pc, int n, double x);

// Validity boundaries used by verify_inequalities (exposed for tests):
// largest x with H_neg(x) >= x^2, from the closed-form crossover of
// u - sqrt(c1 L u) - c2 L at u = ln(1/x).
double h_square_threshold_analytic(const ProofConstants& pc);

// g(u) = (1+u) ln(1+u) - u, the jump-tilt cost integrand.
double tilt_cost_g(double u);

// Smallest k with ln applied k times to T giving a value <= 1.
int iterated_log_star(double horizon);

}  // namespace levy::bounds
