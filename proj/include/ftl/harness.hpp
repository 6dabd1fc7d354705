#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ftl/estimators.hpp"
#include "ftl/metrics.hpp"
#include "ftl/pool.hpp"

namespace ftl::harness {

/// The N estimates collected at one budget, summarized.
struct RunSummary {
  std::size_t budget = 0;
  std::size_t n_runs = 0;
  double mean = 0.0;
  std::optional<double> sample_std;
};

struct BudgetMetrics {
  RunSummary summary;
  metrics::MetricReport report;
};

/// One estimator's full metric sweep over budgets 1..max_budget.
struct Trajectory {
  std::string estimator_name;
  double ground_truth = 0.0;
  double alpha = 0.0;
  std::vector<BudgetMetrics> budgets;
};

/// Per-budget tolerance: a single fixed value or an explicit schedule.
class EpsilonSchedule {
 public:
  static EpsilonSchedule fixed(double epsilon);
  static EpsilonSchedule per_budget(std::vector<double> values);

  /// Tolerance at budget k (1-based).
  double at(std::size_t budget) const;

 private:
  std::variant<double, std::vector<double>> values_;
};

/// Runs n_runs independent trials; trial i uses seed base_seed + i.
/// With independent_budgets the estimate at each budget comes from a fresh
/// run instead of the sequential run's prefix.
std::vector<estimators::TrajectoryRun> run_campaign(const pool::EvaluationPool& pool,
                                                    const estimators::EstimatorConfig& config,
                                                    std::size_t n_runs, std::size_t max_budget,
                                                    std::uint64_t base_seed,
                                                    bool independent_budgets = false);

/// Per-budget SampleStats columns of a run collection.
std::vector<RunSummary> build_summaries(const std::vector<estimators::TrajectoryRun>& runs);

Trajectory summarize_campaign(const std::vector<estimators::TrajectoryRun>& runs, double truth,
                              double alpha, const EpsilonSchedule& epsilon_schedule,
                              std::string estimator_name);

}  // namespace ftl::harness
