#include "levy/tilt_is.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "levy/numerics.hpp"
#include "levy/parallel.hpp"

namespace levy {

double TiltSpec::theta(double x, double s) const {
  if (x < a_lo || x > a_hi || s < active_from) return 0.0;
  double slope = std::abs(barrier.deriv(s));
  return std::log1p(slope * std::abs(x) / m);
}

double TiltSpec::slope_integral(double t) const {
  if (t <= active_from) return 0.0;
  return std::abs(barrier(t) - barrier(active_from));
}

bool TiltSpec::zero_tilt() const { return slope_integral(1e300) == 0.0; }

namespace {

double sign_of(TiltSide side) { return side == TiltSide::negative ? -1.0 : 1.0; }

// x^2 mass of the explicit components inside [lo, hi]
double explicit_x2_mass(const JumpMeasure& jm, double lo, double hi) {
  double mass = 0.0;
  for (const auto& a : jm.atoms)
    if (a.x >= lo && a.x <= hi) mass += a.rate * a.x * a.x;
  for (const auto& p : jm.density) {
    double a = std::max(p.lo, lo);
    double b = std::min(p.hi, hi);
    if (b > a) mass += p.value * (b * b * b - a * a * a) / 3.0;
  }
  return mass;
}

}  // namespace

TiltSpec make_tilt(const LevyTriplet& t, const Boundary& barrier,
                   TiltSide side, double active_from, double mass_fraction) {
  require_valid(t);
  if (!(mass_fraction > 0.0 && mass_fraction <= 1.0))
    throw std::invalid_argument("mass_fraction must lie in (0,1]");
  if (active_from < 0.0)
    throw std::invalid_argument("active_from must be nonnegative");

  double sgn = sign_of(side);
  // boundary slope must match the side: the tilt compensates a barrier
  // moving in the jump direction
  for (double s : {active_from + 0.5, active_from + 2.0, active_from + 31.0}) {
    double d = barrier.deriv(s);
    if (d * sgn < -1e-12)
      throw std::invalid_argument(
          "barrier slope sign does not match the tilt side");
  }

  double side_lo = side == TiltSide::negative ? -1.0 : 0.0;
  double side_hi = side == TiltSide::negative ? 0.0 : 1.0;
  double total = explicit_x2_mass(t.jumps, side_lo, side_hi);
  if (!(total > 0.0))
    throw std::domain_error("no jumps of required sign");

  // smallest symmetric-shrinkage interval holding mass_fraction of the mass
  auto interval = [&](double u) {
    double lo = side == TiltSide::negative ? -1.0 + u : u;
    double hi = side == TiltSide::negative ? -u : 1.0 - u;
    return std::pair<double, double>(lo, hi);
  };
  auto too_small = [&](double u) {
    auto [lo, hi] = interval(u);
    if (hi < lo) return true;
    return explicit_x2_mass(t.jumps, lo, hi) <
           mass_fraction * total * (1.0 - 1e-12);
  };
  double u_max = 0.0;
  if (!too_small(0.5 - 1e-15)) {
    u_max = 0.5 - 1e-15;
  } else if (!too_small(0.0)) {
    u_max = bisect(too_small, 0.0, 0.5, 1e-14);
    if (too_small(u_max)) u_max = std::max(0.0, u_max - 1e-9);
  }
  auto [lo, hi] = interval(u_max);

  // snap to the support inside the interval
  double snap_lo = hi, snap_hi = lo;
  for (const auto& a : t.jumps.atoms) {
    if (a.x >= lo && a.x <= hi) {
      snap_lo = std::min(snap_lo, a.x);
      snap_hi = std::max(snap_hi, a.x);
    }
  }
  for (const auto& p : t.jumps.density) {
    double a = std::max(p.lo, lo);
    double b = std::min(p.hi, hi);
    if (b > a && p.value > 0.0) {
      snap_lo = std::min(snap_lo, a);
      snap_hi = std::max(snap_hi, b);
    }
  }
  if (snap_hi < snap_lo)
    throw std::domain_error("no jumps of required sign");

  TiltSpec spec;
  spec.side = side;
  spec.a_lo = snap_lo;
  spec.a_hi = snap_hi;
  spec.active_from = active_from;
  spec.barrier = barrier;

  for (std::size_t i = 0; i < t.jumps.atoms.size(); ++i) {
    const auto& a = t.jumps.atoms[i];
    if (a.x >= snap_lo && a.x <= snap_hi) {
      spec.m += a.rate * a.x * a.x;
      double w = a.rate * std::abs(a.x);
      spec.mu_abs += w;
      spec.atoms.push_back({a.x, w, static_cast<int>(i)});
    }
  }
  for (const auto& p : t.jumps.density) {
    double a = std::max(p.lo, snap_lo);
    double b = std::min(p.hi, snap_hi);
    if (b > a && p.value > 0.0) {
      spec.m += p.value * (b * b * b - a * a * a) / 3.0;
      double w = p.value * std::abs(b * b - a * a) / 2.0;
      spec.mu_abs += w;
      spec.segments.push_back({a, b, p.value, w});
    }
  }
  if (!(spec.m > 0.0)) throw std::domain_error("no jumps of required sign");
  return spec;
}

namespace {

// one draw from |x| nu(dx) restricted to A, normalized
JumpRecord draw_size(const TiltSpec& spec, double time, rng::Stream& s) {
  double target = s.uniform01() * spec.mu_abs;
  for (const auto& a : spec.atoms) {
    if (target < a.weight)
      return {time, a.x, JumpOrigin::atom, a.atom_index};
    target -= a.weight;
  }
  for (const auto& seg : spec.segments) {
    if (target < seg.weight) {
      // pdf proportional to |x| on the segment: invert the quadratic cdf
      double u = target / seg.weight;
      double lo2 = seg.lo * seg.lo, hi2 = seg.hi * seg.hi;
      double x2 = seg.lo < 0.0 ? hi2 + u * (lo2 - hi2) : lo2 + u * (hi2 - lo2);
      double x = std::sqrt(x2);
      return {time, seg.lo < 0.0 ? -x : x, JumpOrigin::density, -1};
    }
    target -= seg.weight;
  }
  // numerical leftovers land on the last component
  if (!spec.atoms.empty() && spec.segments.empty()) {
    const auto& a = spec.atoms.back();
    return {time, a.x, JumpOrigin::atom, a.atom_index};
  }
  const auto& seg = spec.segments.back();
  return {time, seg.lo < 0.0 ? seg.lo : seg.hi, JumpOrigin::density, -1};
}

// maps a cumulative-slope level u in (0, |b(T)-b(s0)|) back to a time
double invert_slope_level(const TiltSpec& spec, double u, double horizon) {
  const Boundary& b = spec.barrier;
  double s0 = spec.active_from;
  if (b.kind() == BoundaryKind::power && b.gamma() > 0.0) {
    double base = std::pow(s0, b.gamma());
    return std::pow(base + u, 1.0 / b.gamma());
  }
  auto above = [&](double t) { return spec.slope_integral(t) >= u; };
  return bisect(above, s0, horizon, 1e-12);
}

std::vector<JumpRecord> draw_extra_jumps(const TiltSpec& spec, double horizon,
                                         rng::Stream& s) {
  std::vector<JumpRecord> out;
  double total = spec.slope_integral(horizon) * spec.mu_abs / spec.m;
  if (total <= 0.0) return out;
  std::uint64_t n = s.poisson(total);
  if (n == 0) return out;
  std::vector<double> levels(n);
  double span = spec.slope_integral(horizon);
  for (auto& v : levels) v = s.uniform01() * span;
  std::sort(levels.begin(), levels.end());
  out.reserve(n);
  for (double u : levels) {
    double time = invert_slope_level(spec, u, horizon);
    out.push_back(draw_size(spec, time, s));
  }
  return out;
}

detail::ThetaAccumulator theta_accumulator(const TiltSpec& spec) {
  detail::ThetaAccumulator acc;
  acc.enabled = true;
  acc.a_lo = spec.a_lo;
  acc.a_hi = spec.a_hi;
  acc.active_from = spec.active_from;
  acc.slope_of = &spec.barrier;
  acc.inv_m = 1.0 / spec.m;
  return acc;
}

}  // namespace

WeightedSample sample_tilted_path(const LevyTriplet& t, const TiltSpec& spec,
                                  double horizon, const SimConfig& cfg,
                                  RngStamp stamp) {
  require_valid(t);
  require_valid(cfg);
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  rng::Stream tilt_stream(stamp.seed, stamp.stream, rng::Domain::tilt);
  detail::ExtraJumps extra;
  extra.jumps = draw_extra_jumps(spec, horizon, tilt_stream);

  WeightedSample ws;
  ws.path.stamp = stamp;
  ws.path.gauss_var_rate =
      t.sigma2 + t.jumps.density_x2_mass_inside(cfg.small_jump_cutoff);
  rng::Stream base_stream(stamp.seed, stamp.stream, rng::Domain::base);
  detail::ThetaAccumulator acc = theta_accumulator(spec);

  detail::WalkOutcome outcome = detail::walk_record(
      t, horizon, cfg, base_stream, &extra, &acc, &ws.path);
  ws.log_weight =
      spec.slope_integral(horizon) * spec.mu_abs / spec.m - outcome.sum_theta;
  return ws;
}

std::string weighted_runs_to_jsonl(const std::vector<WeightedRunRecord>& runs) {
  std::string out;
  char line[128];
  for (const auto& r : runs) {
    std::snprintf(line, sizeof(line),
                  "{\"log_weight\":%.17g,\"indicator\":%d,\"stream\":%llu}\n",
                  r.log_weight, r.indicator,
                  static_cast<unsigned long long>(r.stream));
    out += line;
  }
  return out;
}

IsEstimate is_estimate_survival(const LevyTriplet& t,
                                const Boundary& b_effective,
                                const TiltSpec& spec, double horizon,
                                std::uint64_t n_paths, const SimConfig& cfg,
                                std::uint64_t seed,
                                std::vector<WeightedRunRecord>* dump) {
  require_valid(t);
  require_valid(cfg);
  if (n_paths < 100) throw std::invalid_argument("need at least 100 paths");

  std::vector<double> weights(n_paths);
  std::vector<double> log_w(n_paths);
  detail::ThetaAccumulator acc = theta_accumulator(spec);
  double comp = spec.slope_integral(horizon) * spec.mu_abs / spec.m;

  parallel_for(n_paths, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      rng::Stream tilt_stream(seed, i, rng::Domain::tilt);
      detail::ExtraJumps extra;
      extra.jumps = draw_extra_jumps(spec, horizon, tilt_stream);
      rng::Stream base_stream(seed, i, rng::Domain::base);
      detail::WalkOutcome out = detail::walk_no_exit(
          t, &b_effective, horizon, cfg, base_stream, &extra, 0.0, &acc);
      weights[i] = out.weight;
      log_w[i] = out.survived ? comp - out.sum_theta : 0.0;
    }
  });

  // max-log rescaling keeps exp() in range; reduction in stream order
  double max_log = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < n_paths; ++i) {
    if (weights[i] > 0.0 && (!any || log_w[i] > max_log)) {
      max_log = log_w[i];
      any = true;
    }
  }
  if (!any) max_log = 0.0;

  KahanSum sum;
  std::vector<double> scaled(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    scaled[i] = weights[i] > 0.0
                    ? weights[i] * std::exp(log_w[i] - max_log)
                    : 0.0;
    sum.add(scaled[i]);
  }
  double n = static_cast<double>(n_paths);
  double mean_scaled = sum.value() / n;
  KahanSum var_sum, sq_sum;
  for (double v : scaled) {
    var_sum.add((v - mean_scaled) * (v - mean_scaled));
    sq_sum.add(v * v);
  }
  double variance = n_paths > 1 ? var_sum.value() / (n - 1.0) : 0.0;
  double rescale = std::exp(max_log);

  IsEstimate result;
  result.est.p = rescale * mean_scaled;
  result.est.n_paths = n_paths;
  result.est.std_error = rescale * std::sqrt(variance / n);
  constexpr double z = 1.959963984540054;
  result.est.ci_low = std::max(0.0, result.est.p - z * result.est.std_error);
  result.est.ci_high = result.est.p + z * result.est.std_error;
  result.ess = sq_sum.value() > 0.0
                   ? sum.value() * sum.value() / sq_sum.value()
                   : 0.0;
  result.low_ess_warning = result.ess < 10.0;

  if (dump) {
    dump->clear();
    dump->reserve(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i)
      dump->push_back({log_w[i], weights[i] > 0.0 ? 1 : 0, i});
  }
  return result;
}

PathSkeleton homogenized_compensator(const LevyTriplet& t,
                                     const TiltSpec& spec, double horizon,
                                     RngStamp stamp) {
  require_valid(t);
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  double span = spec.slope_integral(horizon);
  double rate = spec.mu_abs / spec.m;
  double mg_drift = spec.side == TiltSide::negative ? 1.0 : -1.0;

  rng::Stream stream(stamp.seed, stamp.stream, rng::Domain::aux);
  // compound Poisson in the compensator scale u in [0, span]
  std::vector<JumpRecord> jumps_u;
  if (span > 0.0 && rate > 0.0) {
    std::uint64_t n = stream.poisson(rate * span);
    std::vector<double> levels(n);
    for (auto& v : levels) v = stream.uniform01() * span;
    std::sort(levels.begin(), levels.end());
    jumps_u.reserve(n);
    for (double u : levels) jumps_u.push_back(draw_size(spec, u, stream));
  }

  // evaluate Z(u(t)) on a regular t-grid joined with mapped jump times
  std::vector<double> times;
  constexpr int kGrid = 128;
  for (int i = 0; i <= kGrid; ++i)
    times.push_back(horizon * static_cast<double>(i) / kGrid);
  for (const auto& j : jumps_u)
    times.push_back(invert_slope_level(spec, j.time, horizon));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  PathSkeleton out;
  out.stamp = stamp;
  out.gauss_var_rate = 0.0;
  out.times = times;
  out.values.reserve(times.size());
  std::size_t pos = 0;
  double jump_total = 0.0;
  for (double t_i : times) {
    double u = spec.slope_integral(t_i);
    while (pos < jumps_u.size() && jumps_u[pos].time <= u) {
      jump_total += jumps_u[pos].size;
      JumpRecord r = jumps_u[pos];
      r.time = t_i;
      out.jumps.push_back(r);
      ++pos;
    }
    out.values.push_back(jump_total + mg_drift * u);
  }
  return out;
}

}  // namespace levy
