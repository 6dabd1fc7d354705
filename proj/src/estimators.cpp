#include "ftl/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ftl/rng.hpp"
#include "ftl/stats.hpp"

namespace ftl::estimators {

namespace {

void check_budget(const pool::EvaluationPool& pool, std::size_t max_budget) {
  if (max_budget < 1 || max_budget > pool.size())
    throw std::invalid_argument("budget must lie in [1, |D|] (got " +
                                std::to_string(max_budget) + " for pool of " +
                                std::to_string(pool.size()) + ")");
}

grouping::GroupAssignment single_group(std::size_t n) {
  grouping::GroupAssignment a;
  a.group_count = 1;
  a.labels.assign(n, 0);
  a.weights = {1.0};
  return a;
}

}  // namespace

double active_bayes_reward(const GroupPosterior& group, double theta_sample) {
  if (!(theta_sample > 0.0) || !(theta_sample < 1.0))
    throw std::invalid_argument("active_bayes_reward: theta_sample must lie in (0, 1)");
  const double var_now = stats::beta_moments(group.alpha, group.beta).variance;
  const double var_if_correct = stats::beta_moments(group.alpha + 1.0, group.beta).variance;
  const double var_if_wrong = stats::beta_moments(group.alpha, group.beta + 1.0).variance;
  return group.weight *
         (var_now - (theta_sample * var_if_correct + (1.0 - theta_sample) * var_if_wrong));
}

TrajectoryRun run_random_sampling(const pool::EvaluationPool& pool, std::size_t max_budget,
                                  std::uint64_t seed) {
  check_budget(pool, max_budget);
  const std::size_t n = pool.size();
  Rng rng(seed);

  // Partial Fisher-Yates: the first max_budget slots become a uniform
  // without-replacement prefix.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t j = 0; j < max_budget; ++j)
    std::swap(order[j], order[j + rng.uniform_below(n - j)]);

  TrajectoryRun run;
  run.seed = seed;
  run.acquired.reserve(max_budget);
  run.estimates.reserve(max_budget);
  long long correct = 0;
  for (std::size_t k = 0; k < max_budget; ++k) {
    const auto& rec = pool.records[order[k]];
    run.acquired.push_back(rec.instance_id);
    correct += rec.correct;
    run.estimates.push_back(static_cast<double>(correct) / static_cast<double>(k + 1));
  }
  return run;
}

ActiveBayesContext prepare_active_bayes(const pool::EvaluationPool& pool,
                                        const EstimatorConfig& config) {
  if (config.kind != Kind::active_bayes)
    throw std::invalid_argument("prepare_active_bayes: config.kind is not active_bayes");

  ActiveBayesContext ctx;
  if (pool.has_embeddings()) {
    const auto points = grouping::collect_embeddings(pool);
    if (config.groups.has_value()) {
      if (config.groups->labels.size() != pool.size())
        throw std::invalid_argument("fixed group assignment does not match pool size");
      ctx.groups = *config.groups;
    } else {
      const auto range = grouping::default_group_range(pool.size());
      ctx.groups = grouping::select_group_count(points, range, config.seed);
    }
    ctx.density = grouping::density_scores(points, config.neighbor_k);
  } else {
    // No embeddings: single group, uniform in-group sampling.
    if (config.groups.has_value())
      throw std::invalid_argument("fixed group assignment requires pool embeddings");
    ctx.groups = single_group(pool.size());
  }

  const auto groups = static_cast<std::size_t>(ctx.groups.group_count);
  ctx.priors.resize(groups);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int label = ctx.groups.labels[i];
    if (label < 0 || label >= ctx.groups.group_count)
      throw std::invalid_argument("group assignment label out of range");
    ctx.priors[static_cast<std::size_t>(label)].members.push_back(i);
  }
  // p_g is always the group-size proportion, whatever the assignment claims.
  for (auto& p : ctx.priors) {
    if (p.members.empty()) throw std::invalid_argument("group assignment has an empty group");
    p.weight = static_cast<double>(p.members.size()) / static_cast<double>(pool.size());
  }

  if (config.prior.kind == Prior::Kind::uninformed) {
    for (auto& p : ctx.priors) {
      p.alpha = 0.5;
      p.beta = 0.5;
    }
  } else {
    if (!(config.prior.strength > 0.0))
      throw std::invalid_argument("informed prior strength must be positive");
    if (!pool.has_confidences())
      throw std::invalid_argument("informed prior requires confidences for every record");
    for (auto& p : ctx.priors) {
      double mean_conf = 0.0;
      for (std::size_t i : p.members) mean_conf += *pool.records[i].confidence;
      mean_conf /= static_cast<double>(p.members.size());
      // Keep both pseudo-counts positive even for extreme mean confidence.
      mean_conf = std::clamp(mean_conf, 1e-6, 1.0 - 1e-6);
      p.alpha = config.prior.strength * mean_conf;
      p.beta = config.prior.strength * (1.0 - mean_conf);
    }
  }
  return ctx;
}

TrajectoryRun run_active_bayes(const pool::EvaluationPool& pool, const ActiveBayesContext& context,
                               std::size_t max_budget, std::uint64_t seed) {
  check_budget(pool, max_budget);
  const auto groups = context.priors.size();
  if (groups == 0) throw std::invalid_argument("run_active_bayes: empty context");

  Rng rng(seed);
  auto posteriors = context.priors;

  // Per-group pools of unlabeled members; selection swaps the chosen member
  // to the back so removal stays O(1).
  std::vector<std::vector<std::size_t>> unlabeled(groups);
  for (std::size_t g = 0; g < groups; ++g) unlabeled[g] = posteriors[g].members;

  TrajectoryRun run;
  run.seed = seed;
  run.acquired.reserve(max_budget);
  run.estimates.reserve(max_budget);

  std::vector<double> member_weights;
  for (std::size_t step = 0; step < max_budget; ++step) {
    // Thompson draw + reward, over groups that still have unlabeled members.
    double best_reward = 0.0;
    std::size_t best_group = groups;
    for (std::size_t g = 0; g < groups; ++g) {
      if (unlabeled[g].empty()) continue;
      double theta = rng.beta(posteriors[g].alpha, posteriors[g].beta);
      theta = std::clamp(theta, 1e-12, 1.0 - 1e-12);
      const double reward = active_bayes_reward(posteriors[g], theta);
      if (best_group == groups || reward > best_reward) {
        best_reward = reward;
        best_group = g;
      }
    }
    if (best_group == groups) throw std::runtime_error("budget exceeds pool");
    auto& chosen = unlabeled[best_group];

    std::size_t pick = 0;
    if (context.density.has_value()) {
      member_weights.resize(chosen.size());
      for (std::size_t m = 0; m < chosen.size(); ++m)
        member_weights[m] = context.density->scores[chosen[m]];
      pick = rng.pick_weighted(member_weights);
    } else {
      pick = rng.uniform_below(chosen.size());
    }

    const std::size_t record_index = chosen[pick];
    std::swap(chosen[pick], chosen.back());
    chosen.pop_back();

    const auto& rec = pool.records[record_index];
    auto& post = posteriors[best_group];
    post.alpha += rec.correct;
    post.beta += 1 - rec.correct;
    post.labeled.push_back(record_index);

    double estimate = 0.0;
    for (const auto& p : posteriors) estimate += p.weight * (p.alpha / (p.alpha + p.beta));

    run.acquired.push_back(rec.instance_id);
    run.estimates.push_back(estimate);
  }
  return run;
}

TrajectoryRun run_active_bayes(const pool::EvaluationPool& pool, const EstimatorConfig& config,
                               std::size_t max_budget, std::uint64_t seed) {
  return run_active_bayes(pool, prepare_active_bayes(pool, config), max_budget, seed);
}

}  // namespace ftl::estimators
