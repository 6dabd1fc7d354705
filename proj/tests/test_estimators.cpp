#include "ftl/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "ftl/rng.hpp"
#include "ftl/stats.hpp"
#include "oracles.hpp"

using ftl::estimators::active_bayes_reward;
using ftl::estimators::EstimatorConfig;
using ftl::estimators::GroupPosterior;
using ftl::estimators::Kind;
using ftl::estimators::prepare_active_bayes;
using ftl::estimators::Prior;
using ftl::estimators::run_active_bayes;
using ftl::estimators::run_random_sampling;

namespace {

ftl::pool::EvaluationPool small_pool(std::size_t size, double accuracy, std::uint64_t seed,
                                     int clusters = 0) {
  ftl::pool::SynthConfig config;
  config.name = "unit";
  config.target_accuracy = accuracy;
  config.size = size;
  config.seed = seed;
  config.clusters.count = clusters;
  config.clusters.embedding_dim = 3;
  return ftl::pool::synth_pool(config);
}

GroupPosterior posterior(double alpha, double beta, double weight = 1.0) {
  GroupPosterior g;
  g.alpha = alpha;
  g.beta = beta;
  g.weight = weight;
  return g;
}

}  // namespace

TEST_CASE("random sampling labels the whole pool exactly once at full budget") {
  const auto pool = small_pool(60, 0.7, 1);
  const auto run = run_random_sampling(pool, pool.size(), 42);
  CHECK(run.estimates.back() == pool.ground_truth);

  std::set<std::string> ids(run.acquired.begin(), run.acquired.end());
  CHECK(ids.size() == pool.size());
}

TEST_CASE("random sampling budget one yields a bit") {
  const auto pool = small_pool(20, 0.5, 2);
  const auto run = run_random_sampling(pool, 1, 7);
  CHECK((run.estimates.front() == 0.0 || run.estimates.front() == 1.0));
}

TEST_CASE("random sampling is deterministic and validates the budget") {
  const auto pool = small_pool(30, 0.6, 3);
  const auto a = run_random_sampling(pool, 10, 5);
  const auto b = run_random_sampling(pool, 10, 5);
  CHECK(a.acquired == b.acquired);
  CHECK(a.estimates == b.estimates);
  CHECK_THROWS_AS(run_random_sampling(pool, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_random_sampling(pool, 31, 1), std::invalid_argument);
}

TEST_CASE("random sampling mean estimate is unbiased") {
  // Small Monte Carlo; the 10k-run variant is acceptance criterion 6.
  const auto pool = small_pool(400, 0.65, 4);
  std::vector<double> finals;
  finals.reserve(2000);
  for (std::uint64_t seed = 0; seed < 2000; ++seed)
    finals.push_back(run_random_sampling(pool, 25, seed).estimates.back());
  const auto s = ftl::stats::summarize(finals);
  const double bound = 3.0 * *s.sample_std / std::sqrt(2000.0);
  CHECK(std::fabs(s.mean - pool.ground_truth) <= bound);
}

TEST_CASE("reward at the uninformed prior") {
  // p = 1, alpha = beta = 0.5, theta = 0.5: 0.125 - 0.0625 = 0.0625.
  CHECK(active_bayes_reward(posterior(0.5, 0.5), 0.5) ==
        doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("reward scales linearly in the group weight") {
  const double r1 = active_bayes_reward(posterior(2.0, 3.0, 0.25), 0.4);
  const double r2 = active_bayes_reward(posterior(2.0, 3.0, 0.5), 0.4);
  CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-12));
}

TEST_CASE("reward is non-negative at the predictive mean") {
  // Law of total variance: the expected one-step posterior variance cannot
  // exceed the current variance when the outcome probability is the
  // posterior mean.
  for (double alpha = 0.5; alpha <= 10.0; alpha += 0.5) {
    for (double beta = 0.5; beta <= 10.0; beta += 0.5) {
      const auto g = posterior(alpha, beta);
      const double mean = alpha / (alpha + beta);
      CHECK(active_bayes_reward(g, mean) >= 0.0);
    }
  }
}

TEST_CASE("reward can go negative for surprising outcomes off the mean") {
  // Observing the unlikely side of a skewed posterior widens it; the
  // acquisition rule only needs the argmax, not a sign guarantee.
  CHECK(active_bayes_reward(posterior(0.5, 10.0), 0.9) < 0.0);
}

TEST_CASE("reward validates theta_sample") {
  CHECK_THROWS_AS(active_bayes_reward(posterior(1.0, 1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(active_bayes_reward(posterior(1.0, 1.0), 1.0), std::invalid_argument);
}

TEST_CASE("active bayes first update from the uninformed prior") {
  // Pool of all-correct records, no embeddings: one group, z = 1 on the
  // first step gives posterior (1.5, 0.5) and estimate 0.75.
  std::vector<ftl::pool::PredictionRecord> records;
  for (int i = 0; i < 5; ++i) {
    ftl::pool::PredictionRecord r;
    r.instance_id = "r" + std::to_string(i);
    r.correct = 1;
    records.push_back(r);
  }
  const auto pool = ftl::pool::make_pool("ones", std::move(records));

  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  const auto run = run_active_bayes(pool, config, 1, 9);
  CHECK(run.estimates.front() == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("active bayes full exhaustion reproduces the pool composition") {
  const auto pool = small_pool(80, 0.6, 7, 2);
  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  config.groups = ftl::grouping::kmeans(ftl::grouping::collect_embeddings(pool), 2, 11);
  const auto ctx = prepare_active_bayes(pool, config);
  const auto run = run_active_bayes(pool, ctx, pool.size(), 13);

  // Everything labeled exactly once.
  std::set<std::string> ids(run.acquired.begin(), run.acquired.end());
  CHECK(ids.size() == pool.size());

  // With every member observed, the final posterior is fully determined by
  // the per-group composition: alpha_g = 0.5 + correct_g, beta_g = 0.5 +
  // wrong_g. Posterior-count conservation is what makes this identity hold.
  double expected = 0.0;
  for (std::size_t g = 0; g < ctx.priors.size(); ++g) {
    double correct = 0.0;
    for (std::size_t i : ctx.priors[g].members) correct += pool.records[i].correct;
    const double total = static_cast<double>(ctx.priors[g].members.size());
    expected += ctx.priors[g].weight * (0.5 + correct) / (1.0 + total);
  }
  CHECK(run.estimates.back() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("active bayes acquisitions never repeat and estimates stay inside (0,1)") {
  const auto pool = small_pool(100, 0.4, 17, 3);
  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  config.groups = ftl::grouping::kmeans(ftl::grouping::collect_embeddings(pool), 3, 1);
  const auto run = run_active_bayes(pool, config, 60, 23);
  std::set<std::string> ids(run.acquired.begin(), run.acquired.end());
  CHECK(ids.size() == 60);
  for (double e : run.estimates) {
    CHECK(e > 0.0);
    CHECK(e < 1.0);
  }
}

TEST_CASE("active bayes is deterministic") {
  const auto pool = small_pool(90, 0.55, 19, 2);
  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  config.groups = ftl::grouping::kmeans(ftl::grouping::collect_embeddings(pool), 2, 3);
  const auto a = run_active_bayes(pool, config, 40, 29);
  const auto b = run_active_bayes(pool, config, 40, 29);
  CHECK(a.acquired == b.acquired);
  CHECK(a.estimates == b.estimates);
}

TEST_CASE("informed priors average the group confidences") {
  const auto pool = small_pool(60, 0.7, 23, 2);
  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  config.prior.kind = Prior::Kind::informed;
  config.prior.strength = 4.0;
  config.groups = ftl::grouping::kmeans(ftl::grouping::collect_embeddings(pool), 2, 5);
  const auto ctx = prepare_active_bayes(pool, config);
  for (const auto& g : ctx.priors) {
    double mean_conf = 0.0;
    for (std::size_t i : g.members) mean_conf += *pool.records[i].confidence;
    mean_conf /= static_cast<double>(g.members.size());
    CHECK(g.alpha == doctest::Approx(4.0 * mean_conf).epsilon(1e-12));
    CHECK(g.beta == doctest::Approx(4.0 * (1.0 - mean_conf)).epsilon(1e-12));
    CHECK(g.alpha + g.beta == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("informed prior requires confidences") {
  ftl::pool::SynthConfig cfg;
  cfg.size = 40;
  cfg.target_accuracy = 0.5;
  cfg.with_confidence = false;
  cfg.clusters.count = 2;
  const auto pool = ftl::pool::synth_pool(cfg);

  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  config.prior.kind = Prior::Kind::informed;
  CHECK_THROWS_WITH_AS(prepare_active_bayes(pool, config), doctest::Contains("confidence"),
                       std::invalid_argument);
}

TEST_CASE("pools without embeddings fall back to a single uniform group") {
  const auto pool = small_pool(50, 0.5, 29, 0);
  EstimatorConfig config;
  config.kind = Kind::active_bayes;
  const auto ctx = prepare_active_bayes(pool, config);
  CHECK(ctx.groups.group_count == 1);
  CHECK_FALSE(ctx.density.has_value());

  EstimatorConfig fixed = config;
  fixed.groups = ftl::grouping::GroupAssignment{};
  CHECK_THROWS_AS(prepare_active_bayes(pool, fixed), std::invalid_argument);
}

TEST_CASE("posterior updates match grid-integration conjugacy") {
  // Unit-sized version of acceptance criterion 8.
  ftl::Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    int successes = 0;
    int failures = 0;
    const auto steps = 1 + rng.uniform_below(20);
    for (std::size_t i = 0; i < steps; ++i) (rng.uniform() < 0.6 ? successes : failures) += 1;
    const auto grid = ftl_test::beta_posterior_grid(0.5, 0.5, successes, failures, 400000);
    const auto closed = ftl::stats::beta_moments(0.5 + successes, 0.5 + failures);
    CHECK(std::fabs(grid.mean - closed.mean) < 1e-8);
    CHECK(std::fabs(grid.variance - closed.variance) < 1e-8);
  }
}
