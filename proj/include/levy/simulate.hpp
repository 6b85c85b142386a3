#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levy/boundary.hpp"
#include "levy/levy_model.hpp"
#include "levy/rng.hpp"

namespace levy {

struct RngStamp {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

enum class JumpOrigin { atom, stable, density };

struct JumpRecord {
  double time = 0.0;
  double size = 0.0;
  JumpOrigin origin = JumpOrigin::atom;
  int atom_index = -1;
};

// Grid skeleton of one simulated path. Jump times are grid points; the
// stored value at a jump time is the post-jump (cadlag) value, so the
// pre-jump value is recoverable from the jump records.
struct PathSkeleton {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<JumpRecord> jumps;
  RngStamp stamp;
  double gauss_var_rate = 0.0;  // sigma^2 plus the small-jump surrogate rate
};

struct SimConfig {
  double dt_max = 0.01;
  double small_jump_cutoff = 1e-3;  // epsilon for the density-part split
  bool bridge_correction = true;
};

void require_valid(const SimConfig& cfg);

// Realizes the triplet's law on a grid of step <= dt_max joined with the
// jump arrival times. Finite-activity jumps (atoms, density beyond epsilon)
// are explicit; density mass inside epsilon becomes a centered Gaussian
// surrogate with matching variance; the stable component uses exact
// increments.
PathSkeleton sample_path(const LevyTriplet& t, double horizon,
                         const SimConfig& cfg, RngStamp stamp);

// One increment of the strictly stable component over a step dt
// (distributed as scale * dt^{1/alpha} times a standard stable draw).
double sample_stable_increment(double alpha, double scale, double skew,
                               double dt, RngStamp stamp);

// Skeleton dump: "t,x" rows, plus a jumps sidecar "time,size,origin".
std::string skeleton_to_csv(const PathSkeleton& path);
std::string jumps_to_csv(const PathSkeleton& path);

struct IndicatorResult {
  int indicator = 0;   // 1 iff the skeleton respects the boundary
  double weight = 0.0; // indicator times the per-cell survival factors
};

// Checks X(t_i) <= f(t_i) at grid points and both sides of every jump;
// with bridge_correction on and a Gaussian component present, multiplies
// by 1 - exp(-2 d_i d_{i+1} / (var dt)) per purely Gaussian cell. The
// rng stamp is part of the contract but the check draws nothing.
IndicatorResult no_exit_indicator(const PathSkeleton& path, const Boundary& b,
                                  const SimConfig& cfg, RngStamp stamp = {});

namespace detail {

// Jump stream injected on top of the base triplet (importance sampling).
struct ExtraJumps {
  std::vector<JumpRecord> jumps;  // sorted by time
};

struct WalkOutcome {
  double weight = 0.0;     // 0/1 indicator times bridge survival factors
  double sum_theta = 0.0;  // accumulated theta over observed jumps
  bool survived = false;
};

// Tilt observation: accumulate theta(x, s) over every jump with size in
// [a_lo, a_hi] and time >= active_from.
struct ThetaAccumulator {
  bool enabled = false;
  double a_lo = 0.0;
  double a_hi = 0.0;
  double active_from = 0.0;
  const Boundary* slope_of = nullptr;  // |slope_of'(s)| drives the tilt
  double inv_m = 0.0;
};

// Single pass: simulates the path cell by cell, applies boundary checks on
// [window_lo, horizon], stops at the first violation. The boundary pointer
// may be null (pure simulation, always "survives").
WalkOutcome walk_no_exit(const LevyTriplet& t, const Boundary* b,
                         double horizon, const SimConfig& cfg,
                         rng::Stream& stream, const ExtraJumps* extra,
                         double window_lo, const ThetaAccumulator* theta);

// Same walk without a boundary, recording the full skeleton into *out
// (times/values/jumps only; stamp and variance fields are the caller's).
WalkOutcome walk_record(const LevyTriplet& t, double horizon,
                        const SimConfig& cfg, rng::Stream& stream,
                        const ExtraJumps* extra,
                        const ThetaAccumulator* theta, PathSkeleton* out);

}  // namespace detail

}  // namespace levy
