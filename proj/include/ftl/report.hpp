#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ftl/estimators.hpp"
#include "ftl/harness.hpp"
#include "ftl/margin.hpp"
#include "ftl/pool.hpp"

namespace ftl::report {

/// Fixed 12-significant-digit decimal rendering; the only way numbers are
/// ever serialized, so reruns are byte-identical.
std::string format_number(double value);

enum class EpsilonMode { fixed, dynamic_delta, auto_delta };

struct EstimatorSpec {
  std::string label;
  estimators::Kind kind = estimators::Kind::random_sampling;
  estimators::Prior prior;
  int neighbor_k = 10;
  std::optional<int> fixed_group_count;  // absent = auto (silhouette)
  std::uint64_t seed = 0;
};

struct PoolSource {
  std::optional<std::filesystem::path> path;    // manifest.json of a saved pool
  std::optional<pool::SynthConfig> synth;
};

struct CampaignConfig {
  int schema = 1;
  PoolSource pool_source;
  EstimatorSpec estimator_a;
  EstimatorSpec estimator_b;
  std::size_t n_runs = 100;
  std::size_t max_budget = 100;
  double alpha = 0.05;
  EpsilonMode epsilon_mode = EpsilonMode::fixed;
  double epsilon = 0.05;      // fixed mode
  double delta = 0.0;         // dynamic mode
  double resolution = 0.01;   // auto_delta bisection stop width
  bool independent_budgets = false;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir;
};

CampaignConfig parse_campaign_config(const std::filesystem::path& path);

/// Synthetic-pool generation config for `ftl simulate`.
struct SimulateConfig {
  pool::SynthConfig synth;
  std::filesystem::path out_dir;
};

SimulateConfig parse_simulate_config(const std::filesystem::path& path);

struct ComparisonRow {
  std::string dataset;
  std::size_t budget = 0;
  double p_value_a = 0.0;
  double p_value_b = 0.0;
  double rmse_a = 0.0;
  double rmse_b = 0.0;
  double ft_stat_a = 0.0;
  double ft_stat_b = 0.0;
  bool ft_pass_a = false;
  bool ft_pass_b = false;
  bool conflict = false;  // p-value winner != RMSE winner; ties never conflict
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
};

ComparisonTable build_comparison(const harness::Trajectory& a, const harness::Trajectory& b,
                                 const std::string& dataset);

/// Fraction of rows whose p-value winner differs from the RMSE winner.
double conflict_rate(const ComparisonTable& table);

/// One parsed trajectory CSV row (the same ten columns that are written).
struct TrajectoryRow {
  std::size_t budget = 0;
  double mean = 0.0;
  double sample_std = 0.0;
  double rmse = 0.0;
  double p_two_sided = 0.0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  double ft_stat = 0.0;
  bool ft_pass = false;
  double epsilon = 0.0;
};

void write_trajectory_csv(const std::filesystem::path& path, const harness::Trajectory& t);
std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path);

void write_comparison_csv(const std::filesystem::path& path, const ComparisonTable& table);

ComparisonTable build_comparison(const std::vector<TrajectoryRow>& a,
                                 const std::vector<TrajectoryRow>& b,
                                 const std::string& dataset);

void write_margin_search_json(const std::filesystem::path& path,
                              const margin::MarginSearchResult& result, double resolution);

/// Everything `ftl run` produced, for callers that want the in-memory view.
struct CampaignOutcome {
  pool::EvaluationPool pool;
  harness::Trajectory trajectory_a;
  harness::Trajectory trajectory_b;
  ComparisonTable comparison;
  std::optional<margin::MarginSearchResult> margin_search;
};

/// Full campaign per the config: runs both estimators, resolves the epsilon
/// schedule (fixed / dynamic / auto-selected delta), writes trajectory_a.csv,
/// trajectory_b.csv, comparison.csv, manifest.json and, for auto_delta,
/// margin_search.json into out_dir.
CampaignOutcome run_config(const CampaignConfig& config);

/// Long-format plot data (series, budget, value) re-emitted from a result
/// directory, as "csv" or "json" text.
std::string render_long_format(const std::filesystem::path& result_dir,
                               const std::string& format);

}  // namespace ftl::report
