#pragma once

#include <cstdint>
#include <vector>

#include "levy/boundary.hpp"
#include "levy/levy_model.hpp"
#include "levy/passage_mc.hpp"
#include "levy/simulate.hpp"

namespace levy {

enum class TiltSide { negative, positive };

// Jump tilt theta(x, s) = ln(1 + f'(s)|x|/m) on a compact set A of the
// boundary-compensating sign, where f' is the magnitude of the barrier's
// slope and m = int_A x^2 nu(dx). Extra jumps then arrive at rate
// (e^theta - 1) nu = f'(s)|x|/m nu on A, pushing the simulated law towards
// the moving barrier; the exact Radon-Nikodym weight undoes the change.
struct TiltSpec {
  TiltSide side = TiltSide::negative;
  double a_lo = 0.0;
  double a_hi = 0.0;
  double m = 0.0;       // int_A x^2 nu(dx)
  double mu_abs = 0.0;  // int_A |x| nu(dx)
  double active_from = 0.0;
  Boundary barrier = Boundary::constant(0.0);

  // size sampler for the measure |x| nu(dx) restricted to A
  struct SizeAtom {
    double x = 0.0;
    double weight = 0.0;  // rate * |x|
    int atom_index = -1;
  };
  struct SizeSegment {
    double lo = 0.0;
    double hi = 0.0;
    double g = 0.0;       // density value
    double weight = 0.0;  // g * int |x| over the segment
  };
  std::vector<SizeAtom> atoms;
  std::vector<SizeSegment> segments;

  double theta(double x, double s) const;
  // |b(t) - b(active_from)| for t >= active_from, 0 before
  double slope_integral(double t) const;
  bool zero_tilt() const;
};

// Chooses A as the smallest symmetric-shrinkage interval of the required
// sign holding at least mass_fraction of the x^2 mass available to the
// explicit (atom + density) components inside [-1,0) or (0,1], then snaps
// it to the support. Throws when no explicit jump mass of that sign exists;
// a stable component cannot be tilted (its jumps are folded into the
// closed-form increments) and is left unchanged.
TiltSpec make_tilt(const LevyTriplet& t, const Boundary& barrier,
                   TiltSide side, double active_from = 0.0,
                   double mass_fraction = 0.9);

struct WeightedSample {
  PathSkeleton path;
  double log_weight = 0.0;
};

// Simulates one path under the tilted law: the base triplet plus the extra
// jump stream, whose arrival times come from exact inversion of the
// cumulative intensity (mu_abs/m) |b(t) - b(s0)| and whose sizes follow
// |x| nu(dx) on A. log_weight = (mu_abs/m)(f(T)-f(s0)) - sum theta(x_i,s_i)
// over every observed jump in A after s0, which is the exact density of
// the original law against the tilted one evaluated on the path.
WeightedSample sample_tilted_path(const LevyTriplet& t, const TiltSpec& spec,
                                  double horizon, const SimConfig& cfg,
                                  RngStamp stamp);

struct WeightedRunRecord {
  double log_weight = 0.0;
  int indicator = 0;
  std::uint64_t stream = 0;
};

// One JSON object per line: {"log_weight":..., "indicator":0|1, "stream":...}
std::string weighted_runs_to_jsonl(const std::vector<WeightedRunRecord>& runs);

struct IsEstimate {
  SurvivalEstimate est;
  double ess = 0.0;  // effective sample size of the weighted draws
  bool low_ess_warning = false;
};

// Importance-sampling estimator mean(exp(log_weight) * indicator) against
// b_effective, with a normal CI from the weighted-sample variance. The
// weighted mean is reduced under a max-log rescaling in stream order, so
// results do not depend on the thread count, and a zero tilt reproduces
// estimate_survival bit for bit under shared seeds.
IsEstimate is_estimate_survival(const LevyTriplet& t,
                                const Boundary& b_effective,
                                const TiltSpec& spec, double horizon,
                                std::uint64_t n_paths, const SimConfig& cfg,
                                std::uint64_t seed,
                                std::vector<WeightedRunRecord>* dump = nullptr);

// Time-changed homogeneous compensator: the Levy martingale Z with triplet
// (0, 0, (|x|/m) 1_A nu(dx)), compensated to mean zero, evaluated at
// u = |b(t) - b(s0)|. Returned on a grid joined with the mapped jump times.
PathSkeleton homogenized_compensator(const LevyTriplet& t,
                                     const TiltSpec& spec, double horizon,
                                     RngStamp stamp);

}  // namespace levy
