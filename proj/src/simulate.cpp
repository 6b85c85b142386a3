#include "levy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace levy {

void require_valid(const SimConfig& cfg) {
  if (!(cfg.dt_max > 0.0))
    throw std::invalid_argument("dt_max must be positive");
  if (!(cfg.small_jump_cutoff > 0.0 && cfg.small_jump_cutoff <= 1.0))
    throw std::invalid_argument("small_jump_cutoff must lie in (0,1]");
}

namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform segments of the density part with |x| >= eps; sizes are drawn
// per segment mass, uniformly inside a segment.
struct DensitySegments {
  std::vector<double> lo, hi, cum_mass;
  double total = 0.0;

  void build(const JumpMeasure& jm, double eps) {
    for (const auto& p : jm.density) {
      auto add = [&](double a, double b) {
        if (b <= a) return;
        total += p.value * (b - a);
        lo.push_back(a);
        hi.push_back(b);
        cum_mass.push_back(total);
      };
      if (p.hi <= 0.0) {
        add(p.lo, std::min(p.hi, -eps));
      } else {
        add(std::max(p.lo, eps), p.hi);
      }
    }
  }

  double sample(rng::Stream& s) const {
    double target = s.uniform01() * total;
    std::size_t i =
        std::lower_bound(cum_mass.begin(), cum_mass.end(), target) -
        cum_mass.begin();
    if (i >= lo.size()) i = lo.size() - 1;
    return lo[i] + s.uniform01() * (hi[i] - lo[i]);
  }
};

// Lazy merged arrival feed over the finite-activity components. Each
// component keeps one pending arrival; advancing a component draws its
// next exponential gap, so arrivals come out already sorted per component.
struct JumpFeed {
  struct Component {
    double rate = 0.0;
    double next = kInf;
    JumpOrigin origin = JumpOrigin::atom;
    int atom_index = -1;
    double atom_size = 0.0;
  };

  std::vector<Component> comps;
  DensitySegments density;
  const ExtraJumps* extra = nullptr;
  std::size_t extra_pos = 0;

  void init(const LevyTriplet& t, double eps, rng::Stream& s,
            const ExtraJumps* extra_jumps) {
    for (std::size_t i = 0; i < t.jumps.atoms.size(); ++i) {
      Component c;
      c.rate = t.jumps.atoms[i].rate;
      c.origin = JumpOrigin::atom;
      c.atom_index = static_cast<int>(i);
      c.atom_size = t.jumps.atoms[i].x;
      c.next = s.exponential() / c.rate;
      comps.push_back(c);
    }
    density.build(t.jumps, eps);
    if (density.total > 0.0) {
      Component c;
      c.rate = density.total;
      c.origin = JumpOrigin::density;
      c.next = s.exponential() / c.rate;
      comps.push_back(c);
    }
    extra = extra_jumps;
  }

  double next_time() const {
    double v = kInf;
    for (const auto& c : comps) v = std::min(v, c.next);
    if (extra && extra_pos < extra->jumps.size())
      v = std::min(v, extra->jumps[extra_pos].time);
    return v;
  }

  // Pops every arrival at exactly time v; returns the summed jump size and
  // reports each jump through the callback.
  template <class OnJump>
  double pop_at(double v, rng::Stream& s, OnJump&& on_jump) {
    double sum = 0.0;
    for (auto& c : comps) {
      while (c.next == v) {
        double size =
            c.origin == JumpOrigin::atom ? c.atom_size : density.sample(s);
        sum += size;
        on_jump(JumpRecord{v, size, c.origin, c.atom_index});
        c.next += s.exponential() / c.rate;
      }
    }
    if (extra) {
      while (extra_pos < extra->jumps.size() &&
             extra->jumps[extra_pos].time == v) {
        const JumpRecord& r = extra->jumps[extra_pos++];
        sum += r.size;
        on_jump(r);
      }
    }
    return sum;
  }
};

struct NullObserver {
  void on_point(double, double, double) {}
  void on_jump(const JumpRecord&) {}
};

struct RecordingObserver {
  PathSkeleton* out;
  void on_point(double t, double /*pre*/, double post) {
    out->times.push_back(t);
    out->values.push_back(post);
  }
  void on_jump(const JumpRecord& r) { out->jumps.push_back(r); }
};

template <class Observer>
WalkOutcome walk_core(const LevyTriplet& t, const Boundary* b, double horizon,
                      const SimConfig& cfg, rng::Stream& stream,
                      const ExtraJumps* extra, double window_lo,
                      const ThetaAccumulator* theta, Observer&& obs) {
  WalkOutcome out;
  double eps = cfg.small_jump_cutoff;

  double drift_eff = t.drift;
  for (const auto& a : t.jumps.atoms)
    if (std::abs(a.x) <= 1.0) drift_eff -= a.rate * a.x;
  drift_eff -= t.jumps.density_mean_between(eps);
  double gvar = t.sigma2 + t.jumps.density_x2_mass_inside(eps);

  bool has_stable = t.jumps.stable.has_value();
  double st_alpha = 0.0, st_scale = 0.0, st_skew = 0.0, st_inv_alpha = 0.0;
  if (has_stable) {
    st_alpha = t.jumps.stable->alpha;
    st_scale = t.jumps.stable->scale;
    st_skew = t.jumps.stable->skew;
    st_inv_alpha = 1.0 / st_alpha;
  }

  JumpFeed feed;
  feed.init(t, eps, stream, extra);

  std::uint64_t n_cells =
      static_cast<std::uint64_t>(std::ceil(horizon / cfg.dt_max - 1e-12));
  if (n_cells == 0) n_cells = 1;
  double dt_reg = horizon / static_cast<double>(n_cells);

  auto theta_of = [&](double s, double x) {
    if (!theta || !theta->enabled) return 0.0;
    if (x < theta->a_lo || x > theta->a_hi || s < theta->active_from)
      return 0.0;
    double slope = std::abs(theta->slope_of->deriv(s));
    return std::log1p(slope * std::abs(x) * theta->inv_m);
  };

  double cur_t = 0.0;
  double cur_x = 0.0;
  double weight = 1.0;
  bool windowed_start = window_lo > 0.0;
  bool checking = b != nullptr && !windowed_start;
  bool alive = true;

  if (checking && 0.0 > (*b)(0.0)) {
    out.weight = 0.0;
    out.survived = false;
    return out;
  }
  obs.on_point(0.0, 0.0, 0.0);

  std::uint64_t reg_idx = 1;
  while (cur_t < horizon) {
    double v = reg_idx <= n_cells ? dt_reg * static_cast<double>(reg_idx)
                                  : horizon;
    double jt = feed.next_time();
    if (jt < v) v = jt;
    if (windowed_start && window_lo > cur_t && window_lo < v) v = window_lo;
    if (v > horizon) v = horizon;

    double dt = v - cur_t;
    double inc = 0.0;
    if (dt > 0.0) {
      inc = drift_eff * dt;
      if (gvar > 0.0) inc += std::sqrt(gvar * dt) * stream.normal();
      if (has_stable)
        inc += st_scale * std::pow(dt, st_inv_alpha) *
               stream.stable(st_alpha, st_skew);
    }
    double x_pre = cur_x + inc;

    double jump_sum = 0.0;
    if (v == jt) {
      jump_sum = feed.pop_at(v, stream, [&](const JumpRecord& r) {
        out.sum_theta += theta_of(r.time, r.size);
        obs.on_jump(r);
      });
    }
    double x_post = x_pre + jump_sum;

    if (windowed_start && v >= window_lo) {
      // window opens here; the opening point itself is checked below
      checking = b != nullptr;
      windowed_start = false;
    }

    if (checking) {
      double f_v = (*b)(v);
      if (x_pre > f_v || x_post > f_v) {
        alive = false;
      } else if (cfg.bridge_correction && gvar > 0.0 && dt > 0.0 &&
                 cur_t >= window_lo) {
        double d_u = (*b)(cur_t) - cur_x;
        double d_v = f_v - x_pre;
        weight *= 1.0 - std::exp(-2.0 * d_u * d_v / (gvar * dt));
        if (weight == 0.0) alive = false;
      }
    }
    obs.on_point(v, x_pre, x_post);

    if (!alive) {
      out.weight = 0.0;
      out.survived = false;
      return out;
    }
    cur_t = v;
    cur_x = x_post;
    while (reg_idx <= n_cells && dt_reg * static_cast<double>(reg_idx) <= v)
      ++reg_idx;
  }

  out.weight = b != nullptr ? weight : 1.0;
  out.survived = true;
  return out;
}

}  // namespace

WalkOutcome walk_no_exit(const LevyTriplet& t, const Boundary* b,
                         double horizon, const SimConfig& cfg,
                         rng::Stream& stream, const ExtraJumps* extra,
                         double window_lo, const ThetaAccumulator* theta) {
  return walk_core(t, b, horizon, cfg, stream, extra, window_lo, theta,
                   NullObserver{});
}

WalkOutcome walk_record(const LevyTriplet& t, double horizon,
                        const SimConfig& cfg, rng::Stream& stream,
                        const ExtraJumps* extra,
                        const ThetaAccumulator* theta, PathSkeleton* out) {
  RecordingObserver rec{out};
  return walk_core(t, nullptr, horizon, cfg, stream, extra, 0.0, theta, rec);
}

}  // namespace detail

PathSkeleton sample_path(const LevyTriplet& t, double horizon,
                         const SimConfig& cfg, RngStamp stamp) {
  require_valid(t);
  require_valid(cfg);
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");

  PathSkeleton out;
  out.stamp = stamp;
  out.gauss_var_rate =
      t.sigma2 + t.jumps.density_x2_mass_inside(cfg.small_jump_cutoff);
  rng::Stream stream(stamp.seed, stamp.stream, rng::Domain::base);
  detail::RecordingObserver rec{&out};
  detail::walk_core(t, nullptr, horizon, cfg, stream, nullptr, 0.0, nullptr,
                    rec);
  return out;
}

double sample_stable_increment(double alpha, double scale, double skew,
                               double dt, RngStamp stamp) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw std::domain_error("alpha outside (0,2]");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  rng::Stream stream(stamp.seed, stamp.stream, rng::Domain::base);
  return scale * std::pow(dt, 1.0 / alpha) * stream.stable(alpha, skew);
}

std::string skeleton_to_csv(const PathSkeleton& path) {
  std::string out = "t,x\n";
  char line[80];
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g\n", path.times[i],
                  path.values[i]);
    out += line;
  }
  return out;
}

std::string jumps_to_csv(const PathSkeleton& path) {
  std::string out = "time,size,origin\n";
  char line[96];
  for (const auto& j : path.jumps) {
    const char* origin = j.origin == JumpOrigin::atom
                             ? "atom"
                             : j.origin == JumpOrigin::stable ? "stable"
                                                              : "density";
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%s\n", j.time, j.size,
                  origin);
    out += line;
  }
  return out;
}

IndicatorResult no_exit_indicator(const PathSkeleton& path, const Boundary& b,
                                  const SimConfig& cfg, RngStamp /*stamp*/) {
  if (path.times.empty() || path.times.front() != 0.0)
    throw std::invalid_argument("skeleton must start at t = 0");

  IndicatorResult res;
  double weight = 1.0;
  std::size_t jump_pos = 0;
  double gvar = path.gauss_var_rate;

  for (std::size_t i = 0; i < path.times.size(); ++i) {
    double t_i = path.times[i];
    double f_i = b(t_i);
    double jump_here = 0.0;
    while (jump_pos < path.jumps.size() && path.jumps[jump_pos].time <= t_i) {
      if (path.jumps[jump_pos].time == t_i)
        jump_here += path.jumps[jump_pos].size;
      ++jump_pos;
    }
    double post = path.values[i];
    double pre = post - jump_here;
    if (pre > f_i || post > f_i) return {0, 0.0};
    if (i > 0 && cfg.bridge_correction && gvar > 0.0) {
      double dt = t_i - path.times[i - 1];
      if (dt > 0.0) {
        double d_u = b(path.times[i - 1]) - path.values[i - 1];
        double d_v = f_i - pre;
        weight *= 1.0 - std::exp(-2.0 * d_u * d_v / (gvar * dt));
      }
    }
  }
  res.indicator = 1;
  res.weight = cfg.bridge_correction && gvar > 0.0 ? weight : 1.0;
  return res;
}

}  // namespace levy
