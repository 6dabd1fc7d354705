// Test-only numeric oracles. Everything here follows an independent route
// (quadrature, grid integration) from the library's special-function code.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ftl_test {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_step(const std::function<double(double)>& f, double a, double b,
                                    double fa, double fm, double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 60) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

inline double t_pdf(double x, double df) {
  const double log_norm =
      std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * M_PI);
  return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

/// High-precision P(T_df > t) by quadrature of the density.
inline double t_survival_oracle(double t, double df) {
  if (t < 0.0) return 1.0 - t_survival_oracle(-t, df);
  if (t == 0.0) return 0.5;
  const auto pdf = [df](double x) { return t_pdf(x, df); };
  return 0.5 - adaptive_simpson(pdf, 0.0, t);
}

/// Invert the survival oracle by bisection (alpha < 0.5).
inline double t_critical_oracle(double alpha, double df) {
  double lo = 0.0;
  double hi = 1.0;
  while (t_survival_oracle(hi, df) > alpha) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (t_survival_oracle(mid, df) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct GridMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Beta(a, b) moments by grid integration under x = sin^2(theta); the
/// substitution removes the endpoint singularities of half-integer shapes,
/// so a plain midpoint rule converges cleanly.
inline GridMoments beta_moments_grid(double a, double b, std::size_t points = 1000000) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("grid oracle: shapes must be positive");
  const double h = (M_PI / 2.0) / static_cast<double>(points);
  double z = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) * h;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double w = std::exp((2.0 * a - 1.0) * std::log(s) + (2.0 * b - 1.0) * std::log(c));
    const double x = s * s;
    z += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  GridMoments out;
  out.mean = m1 / z;
  out.variance = m2 / z - out.mean * out.mean;
  return out;
}

/// Posterior moments for Beta(a0, b0) prior after `successes` + `failures`
/// Bernoulli observations, by the same grid route.
inline GridMoments beta_posterior_grid(double a0, double b0, int successes, int failures,
                                       std::size_t points = 1000000) {
  return beta_moments_grid(a0 + successes, b0 + failures, points);
}

}  // namespace ftl_test
