#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftl/grouping.hpp"
#include "ftl/pool.hpp"

namespace ftl::estimators {

enum class Kind { random_sampling, active_bayes };

struct Prior {
  enum class Kind { uninformed, informed };
  Kind kind = Kind::uninformed;
  double strength = 2.0;  // informed pseudo-count mass
};

/// Active-bayes structure knobs. `groups` pins a fixed assignment; when
/// absent the group count is auto-selected by silhouette score. `seed`
/// drives the structural choices (clustering), not the per-trial draws.
struct EstimatorConfig {
  Kind kind = Kind::random_sampling;
  Prior prior;
  int neighbor_k = 10;
  std::optional<grouping::GroupAssignment> groups;
  std::uint64_t seed = 0;
};

/// One group's Beta(alpha, beta) belief plus its member bookkeeping.
struct GroupPosterior {
  double alpha = 0.5;
  double beta = 0.5;
  double weight = 1.0;
  std::vector<std::size_t> members;
  std::vector<std::size_t> labeled;
};

/// Expected one-step reduction of the group's posterior variance, scaled by
/// the group weight, at the Thompson-sampled accuracy theta_sample.
double active_bayes_reward(const GroupPosterior& group, double theta_sample);

/// One estimation trial: acquisition order plus the estimate after every step.
struct TrajectoryRun {
  std::vector<std::string> acquired;
  std::vector<double> estimates;
  std::uint64_t seed = 0;
};

TrajectoryRun run_random_sampling(const pool::EvaluationPool& pool, std::size_t max_budget,
                                  std::uint64_t seed);

/// Pool-level structure shared by every active-bayes trial: the grouping,
/// the static density scores, and the prior state. Built once per campaign.
struct ActiveBayesContext {
  grouping::GroupAssignment groups;
  std::optional<grouping::DensityScores> density;
  std::vector<GroupPosterior> priors;
};

ActiveBayesContext prepare_active_bayes(const pool::EvaluationPool& pool,
                                        const EstimatorConfig& config);

TrajectoryRun run_active_bayes(const pool::EvaluationPool& pool, const ActiveBayesContext& context,
                               std::size_t max_budget, std::uint64_t seed);

/// Convenience overload building the context on the fly.
TrajectoryRun run_active_bayes(const pool::EvaluationPool& pool, const EstimatorConfig& config,
                               std::size_t max_budget, std::uint64_t seed);

}  // namespace ftl::estimators
