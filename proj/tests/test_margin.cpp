#include "ftl/margin.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "ftl/rng.hpp"

using ftl::harness::RunSummary;
using ftl::margin::Branch;
using ftl::margin::dynamic_epsilon;
using ftl::margin::search_margin;

namespace {

RunSummary summary(std::size_t budget, std::size_t n, double mean, double sd) {
  RunSummary s;
  s.budget = budget;
  s.n_runs = n;
  s.mean = mean;
  s.sample_std = sd;
  return s;
}

std::vector<RunSummary> flat_summaries(std::size_t budgets, std::size_t n, double mean,
                                       double sd) {
  std::vector<RunSummary> out;
  for (std::size_t k = 1; k <= budgets; ++k) out.push_back(summary(k, n, mean, sd));
  return out;
}

}  // namespace

TEST_CASE("dynamic epsilon reduces to delta when the spread is zero") {
  CHECK(dynamic_epsilon(0.037, summary(1, 50, 0.7, 0.0), 0.05) == 0.037);
}

TEST_CASE("dynamic epsilon matches the critical-value form") {
  // delta = 0, N = 100, s = 0.02: t_crit(0.05, 99) * 0.002 ~ 0.0033208.
  const double eps = dynamic_epsilon(0.0, summary(1, 100, 0.7, 0.02), 0.05);
  CHECK(std::fabs(eps - 0.0033208) < 1e-6);
}

TEST_CASE("dynamic epsilon grows strictly with delta") {
  const auto s = summary(3, 40, 0.6, 0.05);
  double prev = -1.0;
  for (double delta = 0.0; delta <= 0.2; delta += 0.01) {
    const double eps = dynamic_epsilon(delta, s, 0.05);
    CHECK(eps > prev);
    prev = eps;
  }
}

TEST_CASE("dynamic epsilon rejects single-run summaries") {
  RunSummary s;
  s.budget = 1;
  s.n_runs = 1;
  s.mean = 0.5;
  CHECK_THROWS_AS(dynamic_epsilon(0.01, s, 0.05), std::invalid_argument);
}

TEST_CASE("identical estimators are never distinguished") {
  const auto a = flat_summaries(20, 50, 0.7, 0.03);
  const auto result = search_margin(a, a, 0.7, 0.05);
  CHECK_FALSE(result.delta_star.has_value());
  CHECK(result.high - result.low < 0.01);
  CHECK(result.trace.size() <= 7);
}

TEST_CASE("degenerate biased-vs-exact pair distinguishes below the bias") {
  // A sits on the truth with zero spread, B sits 0.1 above it. With the
  // dynamic tolerance the verdict depends only on |bias| < delta, so the
  // search walks down to the smallest representable midpoint above zero.
  const auto a = flat_summaries(10, 50, 0.7, 0.0);
  const auto b = flat_summaries(10, 50, 0.8, 0.0);
  const auto result = search_margin(a, b, 0.7, 0.05);
  REQUIRE(result.delta_star.has_value());
  CHECK(*result.delta_star <= 0.1);
  CHECK(*result.delta_star == doctest::Approx(0.0078125).epsilon(1e-12));
  CHECK(result.high - result.low < 0.01);
  CHECK(result.trace.size() == 7);

  // At delta_star the recheck shows one estimator passing and one failing.
  bool diverged = false;
  for (std::size_t k = 0; k < result.pass_a.size(); ++k)
    diverged = diverged || result.pass_a[k] != result.pass_b[k];
  CHECK(diverged);
}

TEST_CASE("exact estimators on both sides terminate with Null via both-pass") {
  const auto a = flat_summaries(10, 50, 0.7, 0.0);
  const auto result = search_margin(a, a, 0.7, 0.05);
  CHECK_FALSE(result.delta_star.has_value());
  for (const auto& entry : result.trace) CHECK(entry.branch == Branch::both_pass_left);
  CHECK(result.high == doctest::Approx(0.0078125).epsilon(1e-12));
}

TEST_CASE("bisection runs at most ceil(log2(1/resolution)) iterations") {
  ftl::Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = flat_summaries(15, 40, 0.6, 0.0);
    auto b = flat_summaries(15, 40, 0.6, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k].mean = 0.6 + 0.2 * (rng.uniform() - 0.5);
      b[k].mean = 0.6 + 0.2 * (rng.uniform() - 0.5);
      a[k].sample_std = 0.05 * rng.uniform();
      b[k].sample_std = 0.05 * rng.uniform();
    }
    const auto result = search_margin(a, b, 0.6, 0.05);
    CHECK(result.trace.size() <= 7);
    CHECK(result.high - result.low < 0.01);
    if (result.delta_star.has_value()) {
      bool diverged = false;
      for (std::size_t k = 0; k < result.pass_a.size(); ++k)
        diverged = diverged || result.pass_a[k] != result.pass_b[k];
      CHECK(diverged);
    }
  }
}

TEST_CASE("the emitted schedules use each estimator's own spread") {
  const auto a = flat_summaries(5, 30, 0.7, 0.00);
  const auto b = flat_summaries(5, 30, 0.7, 0.04);
  const auto result = search_margin(a, b, 0.7, 0.05);
  REQUIRE(result.epsilon_a.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(result.epsilon_a[k] == doctest::Approx(result.schedule_delta).epsilon(1e-12));
    CHECK(result.epsilon_b[k] > result.epsilon_a[k]);
  }
}

TEST_CASE("mismatched and undersized summaries are rejected") {
  const auto a = flat_summaries(5, 30, 0.7, 0.02);
  auto b = flat_summaries(5, 30, 0.7, 0.02);
  b[2].budget = 99;
  CHECK_THROWS_WITH_AS(search_margin(a, b, 0.7, 0.05), doctest::Contains("mismatched"),
                       std::invalid_argument);
  CHECK_THROWS_AS(search_margin(a, flat_summaries(4, 30, 0.7, 0.02), 0.7, 0.05),
                  std::invalid_argument);
  CHECK_THROWS_AS(search_margin(a, flat_summaries(5, 1, 0.7, 0.02), 0.7, 0.05),
                  std::invalid_argument);
}
