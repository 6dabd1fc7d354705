#include "ftl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ftl::metrics {

namespace {

void require_testable(const stats::SampleStats& s) {
  if (s.n < 2 || !s.sample_std.has_value())
    throw std::invalid_argument("test undefined for N<2");
}

}  // namespace

ErrorDecomposition mse_rmse(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw std::invalid_argument("empty sample");
  if (!(truth >= 0.0) || !(truth <= 1.0))
    throw std::invalid_argument("mse_rmse: truth must lie in [0, 1]");

  const auto s = stats::summarize(estimates);
  double se = 0.0;
  for (double v : estimates) {
    const double d = v - truth;
    se += d * d;
  }

  ErrorDecomposition out;
  out.mse = se / static_cast<double>(estimates.size());
  out.rmse = std::sqrt(out.mse);
  out.bias = s.mean - truth;
  out.pop_var = s.pop_var;
  return out;
}

double two_sided_test(const stats::SampleStats& s, double truth) {
  require_testable(s);
  const double sd = *s.sample_std;
  if (sd == 0.0) return s.mean == truth ? 1.0 : 0.0;

  const double se = sd / std::sqrt(static_cast<double>(s.n));
  const double t = (s.mean - truth) / se;
  const double df = static_cast<double>(s.n - 1);
  return std::clamp(2.0 * stats::t_survival(std::fabs(t), df), 0.0, 1.0);
}

TostResult ft_eval(const stats::SampleStats& s, double truth, double epsilon, double alpha) {
  require_testable(s);
  if (epsilon < 0.0) throw std::invalid_argument("ft_eval: epsilon must be non-negative");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("ft_eval: alpha must lie in (0, 1)");

  const double bias = s.mean - truth;
  const double sd = *s.sample_std;

  TostResult out;
  if (sd == 0.0) {
    // Degenerate limit: each one-sided p collapses to 0 on strict
    // satisfaction of its inequality, else 1.
    out.p_lower = bias > -epsilon ? 0.0 : 1.0;
    out.p_upper = bias < epsilon ? 0.0 : 1.0;
  } else {
    const double se = sd / std::sqrt(static_cast<double>(s.n));
    const double df = static_cast<double>(s.n - 1);
    const double t_lower = (bias + epsilon) / se;
    const double t_upper = (epsilon - bias) / se;
    out.p_lower = stats::t_survival(t_lower, df);
    out.p_upper = stats::t_survival(t_upper, df);
  }
  out.ft_pass = std::max(out.p_lower, out.p_upper) < alpha;
  return out;
}

MetricReport evaluate(std::span<const double> estimates, double truth, double epsilon,
                      double alpha) {
  const auto s = stats::summarize(estimates);
  const auto err = mse_rmse(estimates, truth);
  const auto tost = ft_eval(s, truth, epsilon, alpha);

  MetricReport r;
  r.mse = err.mse;
  r.rmse = err.rmse;
  r.bias = err.bias;
  r.pop_var = err.pop_var;
  r.p_two_sided = two_sided_test(s, truth);
  r.p_lower = tost.p_lower;
  r.p_upper = tost.p_upper;
  r.ft_stat = std::max(tost.p_lower, tost.p_upper);
  r.ft_pass = tost.ft_pass;
  r.epsilon_used = epsilon;
  r.alpha_used = alpha;
  return r;
}

}  // namespace ftl::metrics
