#include "ftl/harness.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "ftl/rng.hpp"
#include "ftl/stats.hpp"

namespace ftl::harness {

EpsilonSchedule EpsilonSchedule::fixed(double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  EpsilonSchedule s;
  s.values_ = epsilon;
  return s;
}

EpsilonSchedule EpsilonSchedule::per_budget(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("epsilon schedule must be non-empty");
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  }
  EpsilonSchedule s;
  s.values_ = std::move(values);
  return s;
}

double EpsilonSchedule::at(std::size_t budget) const {
  if (budget < 1) throw std::invalid_argument("budget is 1-based");
  if (const double* fixed = std::get_if<double>(&values_)) return *fixed;
  const auto& v = std::get<std::vector<double>>(values_);
  if (budget > v.size()) throw std::invalid_argument("budget beyond epsilon schedule");
  return v[budget - 1];
}

namespace {

estimators::TrajectoryRun run_one_trial(const pool::EvaluationPool& pool,
                                        const estimators::EstimatorConfig& config,
                                        const estimators::ActiveBayesContext* context,
                                        std::size_t max_budget, std::uint64_t seed) {
  if (config.kind == estimators::Kind::random_sampling)
    return estimators::run_random_sampling(pool, max_budget, seed);
  return estimators::run_active_bayes(pool, *context, max_budget, seed);
}

}  // namespace

std::vector<estimators::TrajectoryRun> run_campaign(const pool::EvaluationPool& pool,
                                                    const estimators::EstimatorConfig& config,
                                                    std::size_t n_runs, std::size_t max_budget,
                                                    std::uint64_t base_seed,
                                                    bool independent_budgets) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");

  // Shared immutable structure (grouping, density, priors) built once.
  std::optional<estimators::ActiveBayesContext> context;
  if (config.kind == estimators::Kind::active_bayes)
    context = estimators::prepare_active_bayes(pool, config);
  const auto* ctx = context.has_value() ? &*context : nullptr;

  std::vector<estimators::TrajectoryRun> runs(n_runs);
  auto run_trial = [&](std::size_t trial) {
    const std::uint64_t trial_seed = base_seed + trial;
    if (!independent_budgets) {
      runs[trial] = run_one_trial(pool, config, ctx, max_budget, trial_seed);
      return;
    }
    // Expensive reading: a fresh run per budget; the trajectory keeps the
    // full-budget run's acquisition order.
    auto full = run_one_trial(pool, config, ctx, max_budget, mix_seed(trial_seed, max_budget));
    for (std::size_t k = 1; k < max_budget; ++k) {
      const auto partial = run_one_trial(pool, config, ctx, k, mix_seed(trial_seed, k));
      full.estimates[k - 1] = partial.estimates.back();
    }
    full.seed = trial_seed;
    runs[trial] = std::move(full);
  };

  const std::size_t workers = std::min<std::size_t>(
      n_runs, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_runs; ++t) run_trial(t);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w]() {
        for (std::size_t t = w; t < n_runs; t += workers) run_trial(t);
      });
    }
    for (auto& th : threads) th.join();
  }
  return runs;
}

std::vector<RunSummary> build_summaries(const std::vector<estimators::TrajectoryRun>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  const std::size_t max_budget = runs.front().estimates.size();
  for (const auto& run : runs) {
    if (run.estimates.size() != max_budget)
      throw std::invalid_argument("ragged runs: all trials must cover the same budgets");
  }

  std::vector<RunSummary> summaries;
  summaries.reserve(max_budget);
  std::vector<double> column(runs.size());
  for (std::size_t k = 0; k < max_budget; ++k) {
    for (std::size_t t = 0; t < runs.size(); ++t) column[t] = runs[t].estimates[k];
    // Sorted accumulation keeps aggregates bit-identical under any trial order.
    std::sort(column.begin(), column.end());
    const auto s = stats::summarize(column);
    RunSummary summary;
    summary.budget = k + 1;
    summary.n_runs = s.n;
    summary.mean = s.mean;
    summary.sample_std = s.sample_std;
    summaries.push_back(summary);
  }
  return summaries;
}

Trajectory summarize_campaign(const std::vector<estimators::TrajectoryRun>& runs, double truth,
                              double alpha, const EpsilonSchedule& epsilon_schedule,
                              std::string estimator_name) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  const std::size_t max_budget = runs.front().estimates.size();
  for (const auto& run : runs) {
    if (run.estimates.size() != max_budget)
      throw std::invalid_argument("ragged runs: all trials must cover the same budgets");
  }

  Trajectory trajectory;
  trajectory.estimator_name = std::move(estimator_name);
  trajectory.ground_truth = truth;
  trajectory.alpha = alpha;
  trajectory.budgets.reserve(max_budget);

  std::vector<double> column(runs.size());
  for (std::size_t k = 1; k <= max_budget; ++k) {
    for (std::size_t t = 0; t < runs.size(); ++t) column[t] = runs[t].estimates[k - 1];
    std::sort(column.begin(), column.end());
    const auto s = stats::summarize(column);

    BudgetMetrics cell;
    cell.summary.budget = k;
    cell.summary.n_runs = s.n;
    cell.summary.mean = s.mean;
    cell.summary.sample_std = s.sample_std;
    cell.report = metrics::evaluate(column, truth, epsilon_schedule.at(k), alpha);
    trajectory.budgets.push_back(std::move(cell));
  }
  return trajectory;
}

}  // namespace ftl::harness
