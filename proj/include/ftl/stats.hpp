#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace ftl::stats {

/// Descriptive statistics of one estimate sample.
/// sample_std uses the N-1 denominator and is absent for N = 1;
/// pop_var uses the N denominator.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sample_std;
  double pop_var = 0.0;
};

SampleStats summarize(std::span<const double> estimates);

/// Regularized incomplete beta I_x(a, b), evaluated with a Lentz-style
/// continued fraction and the usual symmetry swap for convergence.
double regularized_incomplete_beta(double x, double a, double b);

/// Upper-tail probability P(T_df > t) of Student's t.
double t_survival(double t_value, double df);

/// Inverse of t_survival in t: the value with upper-tail mass alpha.
double t_critical(double alpha, double df);

struct BetaMoments {
  double mean = 0.0;
  double variance = 0.0;
};

BetaMoments beta_moments(double alpha_param, double beta_param);

}  // namespace ftl::stats
