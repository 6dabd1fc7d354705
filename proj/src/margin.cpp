#include "ftl/margin.hpp"

#include <cmath>
#include <stdexcept>

#include "ftl/metrics.hpp"
#include "ftl/stats.hpp"

namespace ftl::margin {

namespace {

stats::SampleStats to_stats(const harness::RunSummary& summary) {
  if (summary.n_runs < 2 || !summary.sample_std.has_value())
    throw std::invalid_argument("test undefined for N<2");
  stats::SampleStats s;
  s.n = summary.n_runs;
  s.mean = summary.mean;
  s.sample_std = summary.sample_std;
  const double sd = *summary.sample_std;
  s.pop_var = sd * sd * static_cast<double>(summary.n_runs - 1) /
              static_cast<double>(summary.n_runs);
  return s;
}

bool ft_pass_at(const harness::RunSummary& summary, double truth, double delta, double alpha) {
  const double epsilon = dynamic_epsilon(delta, summary, alpha);
  return metrics::ft_eval(to_stats(summary), truth, epsilon, alpha).ft_pass;
}

}  // namespace

double dynamic_epsilon(double delta, const harness::RunSummary& summary, double alpha) {
  if (summary.n_runs < 2 || !summary.sample_std.has_value())
    throw std::invalid_argument("dynamic_epsilon undefined for N<2");
  if (delta < 0.0) throw std::invalid_argument("dynamic_epsilon: delta must be non-negative");
  const double n = static_cast<double>(summary.n_runs);
  return delta + stats::t_critical(alpha, n - 1.0) * *summary.sample_std / std::sqrt(n);
}

MarginSearchResult search_margin(std::span<const harness::RunSummary> summaries_a,
                                 std::span<const harness::RunSummary> summaries_b, double truth,
                                 double alpha, double resolution) {
  if (summaries_a.empty() || summaries_a.size() != summaries_b.size())
    throw std::invalid_argument("search_margin: summaries must cover the same budgets");
  for (std::size_t i = 0; i < summaries_a.size(); ++i) {
    if (summaries_a[i].budget != summaries_b[i].budget)
      throw std::invalid_argument("search_margin: mismatched budget ranges");
    if (summaries_a[i].n_runs < 2 || summaries_b[i].n_runs < 2)
      throw std::invalid_argument("search_margin: summaries need n_runs >= 2");
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("search_margin: resolution must be > 0");

  MarginSearchResult result;
  double low = 0.0;
  double high = 1.0;
  double last_delta = 0.5;

  while (high - low >= resolution) {
    const double delta = 0.5 * (low + high);
    last_delta = delta;

    bool distinguished = false;
    bool pass_a = false;
    bool pass_b = false;
    std::size_t divergent_budget = 0;
    for (std::size_t i = 0; i < summaries_a.size(); ++i) {
      pass_a = ft_pass_at(summaries_a[i], truth, delta, alpha);
      pass_b = ft_pass_at(summaries_b[i], truth, delta, alpha);
      if (pass_a != pass_b) {
        distinguished = true;
        divergent_budget = summaries_a[i].budget;
        break;
      }
    }

    TraceEntry entry;
    entry.delta = delta;
    entry.distinguished = distinguished;
    entry.first_divergent_budget = divergent_budget;
    if (distinguished) {
      result.delta_star = delta;
      high = delta;
      entry.branch = Branch::distinguished_left;
    } else if (pass_a && pass_b) {
      // No divergence, so pass status is shared at every budget; the branch
      // is judged on the loop's final values (the last budget).
      high = delta;
      entry.branch = Branch::both_pass_left;
    } else {
      low = delta;
      entry.branch = Branch::both_fail_right;
    }
    entry.low = low;
    entry.high = high;
    result.trace.push_back(entry);
  }

  result.low = low;
  result.high = high;
  result.schedule_delta = result.delta_star.value_or(last_delta);

  result.epsilon_a.reserve(summaries_a.size());
  result.epsilon_b.reserve(summaries_a.size());
  result.pass_a.reserve(summaries_a.size());
  result.pass_b.reserve(summaries_a.size());
  for (std::size_t i = 0; i < summaries_a.size(); ++i) {
    result.epsilon_a.push_back(dynamic_epsilon(result.schedule_delta, summaries_a[i], alpha));
    result.epsilon_b.push_back(dynamic_epsilon(result.schedule_delta, summaries_b[i], alpha));
    result.pass_a.push_back(ft_pass_at(summaries_a[i], truth, result.schedule_delta, alpha));
    result.pass_b.push_back(ft_pass_at(summaries_b[i], truth, result.schedule_delta, alpha));
  }
  return result;
}

std::string to_string(Branch branch) {
  switch (branch) {
    case Branch::distinguished_left:
      return "distinguished_left";
    case Branch::both_pass_left:
      return "both_pass_left";
    case Branch::both_fail_right:
      return "both_fail_right";
  }
  return "unknown";
}

}  // namespace ftl::margin
