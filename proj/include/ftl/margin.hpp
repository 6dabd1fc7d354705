#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ftl/harness.hpp"

namespace ftl::margin {

/// Dynamic tolerance: epsilon = delta + t_crit(alpha, N-1) * s / sqrt(N).
double dynamic_epsilon(double delta, const harness::RunSummary& summary, double alpha);

enum class Branch { distinguished_left, both_pass_left, both_fail_right };

struct TraceEntry {
  double delta = 0.0;
  bool distinguished = false;
  std::size_t first_divergent_budget = 0;  // 0 = no divergence
  Branch branch = Branch::both_fail_right;
  double low = 0.0;   // bracket after the update
  double high = 1.0;
};

struct MarginSearchResult {
  std::optional<double> delta_star;
  std::vector<TraceEntry> trace;
  double low = 0.0;  // terminal bracket
  double high = 1.0;

  /// Delta used for the emitted schedules: delta_star when found, else the
  /// last midpoint evaluated.
  double schedule_delta = 0.0;
  std::vector<double> epsilon_a;
  std::vector<double> epsilon_b;
  std::vector<bool> pass_a;
  std::vector<bool> pass_b;
};

/// Binary search for the minimum discrimination margin at which the two
/// estimators receive different fault-tolerant verdicts at some budget.
/// Summaries are precomputed once; the estimates do not depend on delta.
MarginSearchResult search_margin(std::span<const harness::RunSummary> summaries_a,
                                 std::span<const harness::RunSummary> summaries_b, double truth,
                                 double alpha, double resolution = 0.01);

std::string to_string(Branch branch);

}  // namespace ftl::margin
