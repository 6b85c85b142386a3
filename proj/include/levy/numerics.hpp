#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace levy {

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Compensated accumulator; summation order is fixed by the caller, which
// keeps reductions bit-identical across thread counts.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

// 95% Wilson score interval, with fractional success counts allowed.
inline WilsonInterval wilson95(double successes, double n) {
  if (n <= 0.0) throw std::invalid_argument("wilson95: n must be positive");
  constexpr double z = 1.959963984540054;
  double p = successes / n;
  double z2n = z * z / n;
  double denom = 1.0 + z2n;
  double center = (p + z2n / 2.0) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / denom;
  double lo = center - half;
  double hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  if (lo > p) lo = p;
  if (hi < p) hi = p;
  return {lo, hi};
}

namespace detail {
inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0,
                              depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-10,
                               int max_depth = 40) {
  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  double whole = detail::simpson(a, b, fa, fm, fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                      max_depth);
}

// Root of a monotone function by bisection; pred(x) is false left of the
// root and true right of it.
inline double bisect(const std::function<bool(double)>& pred, double lo,
                     double hi, double rel_tol = 1e-9, int max_iter = 200) {
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= rel_tol * (std::abs(lo) + std::abs(hi)) * 0.5) break;
  }
  return 0.5 * (lo + hi);
}

struct WlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Weighted least squares with known per-point variances (weights = 1/var).
inline WlsFit weighted_least_squares(const std::vector<double>& x,
                                     const std::vector<double>& y,
                                     const std::vector<double>& w) {
  if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
    throw std::invalid_argument("weighted_least_squares: bad inputs");
  double sw = 0.0, swx = 0.0, swy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  double xbar = swx / sw;
  double ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx <= 0.0) throw std::invalid_argument("weighted_least_squares: degenerate x");
  WlsFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

}  // namespace levy
