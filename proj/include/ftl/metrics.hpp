#pragma once

#include <span>

#include "ftl/stats.hpp"

namespace ftl::metrics {

/// MSE split into its bias and variance parts: mse = bias^2 + pop_var.
struct ErrorDecomposition {
  double mse = 0.0;
  double rmse = 0.0;
  double bias = 0.0;
  double pop_var = 0.0;
};

ErrorDecomposition mse_rmse(std::span<const double> estimates, double truth);

/// Two-sided one-sample t-test of mean-equals-truth; returns the p-value.
double two_sided_test(const stats::SampleStats& s, double truth);

struct TostResult {
  double p_lower = 1.0;
  double p_upper = 1.0;
  bool ft_pass = false;
};

/// Fault-tolerant test: two one-sided t-tests against the interval
/// [truth - epsilon, truth + epsilon]; passes iff max(p_lower, p_upper) < alpha.
TostResult ft_eval(const stats::SampleStats& s, double truth, double epsilon, double alpha);

/// One budget cell's full metric set.
struct MetricReport {
  double mse = 0.0;
  double rmse = 0.0;
  double bias = 0.0;
  double pop_var = 0.0;
  double p_two_sided = 1.0;
  double p_lower = 1.0;
  double p_upper = 1.0;
  double ft_stat = 1.0;
  bool ft_pass = false;
  double epsilon_used = 0.0;
  double alpha_used = 0.0;
};

MetricReport evaluate(std::span<const double> estimates, double truth, double epsilon,
                      double alpha);

}  // namespace ftl::metrics
