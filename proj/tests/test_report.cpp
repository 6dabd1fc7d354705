#include "ftl/report.hpp"

#include <filesystem>
#include <fstream>

#include "doctest.h"

namespace fs = std::filesystem;
using ftl::report::build_comparison;
using ftl::report::CampaignConfig;
using ftl::report::ComparisonTable;
using ftl::report::conflict_rate;
using ftl::report::format_number;
using ftl::report::TrajectoryRow;

namespace {

fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("ftl_report_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TrajectoryRow row(std::size_t budget, double p, double rmse) {
  TrajectoryRow r;
  r.budget = budget;
  r.p_two_sided = p;
  r.rmse = rmse;
  r.ft_stat = p;
  return r;
}

CampaignConfig minimal_config(const fs::path& out_dir) {
  CampaignConfig config;
  ftl::pool::SynthConfig synth;
  synth.name = "tiny";
  synth.target_accuracy = 0.7;
  synth.size = 20;
  synth.seed = 9;
  config.pool_source.synth = synth;
  config.estimator_a.label = "RS1";
  config.estimator_b.label = "RS2";
  config.estimator_b.seed = 1;
  config.n_runs = 3;
  config.max_budget = 5;
  config.epsilon_mode = ftl::report::EpsilonMode::fixed;
  config.epsilon = 0.05;
  config.base_seed = 4;
  config.out_dir = out_dir;
  return config;
}

}  // namespace

TEST_CASE("format_number pins twelve significant digits") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1.23456789012345e-7) == "1.23456789012e-07");
  CHECK(format_number(0.0) == "0");
}

TEST_CASE("conflict flags follow the winner conventions") {
  std::vector<TrajectoryRow> a;
  std::vector<TrajectoryRow> b;
  // A wins both metrics: no conflict.
  a.push_back(row(1, 0.9, 0.01));
  b.push_back(row(1, 0.5, 0.02));
  // A wins p-value, B wins RMSE: conflict.
  a.push_back(row(2, 0.9, 0.05));
  b.push_back(row(2, 0.5, 0.02));
  // Exact p tie: never a conflict.
  a.push_back(row(3, 0.5, 0.05));
  b.push_back(row(3, 0.5, 0.02));
  // B wins p-value, A wins RMSE: conflict.
  a.push_back(row(4, 0.1, 0.01));
  b.push_back(row(4, 0.7, 0.08));

  const auto table = build_comparison(a, b, "unit");
  CHECK_FALSE(table.rows[0].conflict);
  CHECK(table.rows[1].conflict);
  CHECK_FALSE(table.rows[2].conflict);
  CHECK(table.rows[3].conflict);
  CHECK(conflict_rate(table) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("a dominant estimator never conflicts") {
  std::vector<TrajectoryRow> a;
  std::vector<TrajectoryRow> b;
  for (std::size_t k = 1; k <= 10; ++k) {
    a.push_back(row(k, 0.8, 0.01));
    b.push_back(row(k, 0.2, 0.05));
  }
  CHECK(conflict_rate(build_comparison(a, b, "unit")) == 0.0);
}

TEST_CASE("hand-built table with three of four disagreements") {
  std::vector<TrajectoryRow> a;
  std::vector<TrajectoryRow> b;
  a.push_back(row(1, 0.9, 0.05));
  b.push_back(row(1, 0.3, 0.01));  // conflict
  a.push_back(row(2, 0.2, 0.01));
  b.push_back(row(2, 0.6, 0.05));  // conflict
  a.push_back(row(3, 0.9, 0.01));
  b.push_back(row(3, 0.3, 0.05));  // no conflict
  a.push_back(row(4, 0.1, 0.02));
  b.push_back(row(4, 0.8, 0.09));  // conflict
  CHECK(conflict_rate(build_comparison(a, b, "unit")) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("conflict_rate rejects an empty table") {
  CHECK_THROWS_AS(conflict_rate(ComparisonTable{}), std::invalid_argument);
}

TEST_CASE("run_config writes the full bundle") {
  const auto dir = temp_dir("bundle");
  const auto outcome = ftl::report::run_config(minimal_config(dir));

  CHECK(fs::exists(dir / "trajectory_a.csv"));
  CHECK(fs::exists(dir / "trajectory_b.csv"));
  CHECK(fs::exists(dir / "comparison.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "margin_search.json"));  // fixed-epsilon mode

  const auto rows = ftl::report::read_trajectory_csv(dir / "trajectory_a.csv");
  REQUIRE(rows.size() == 5);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].budget == k + 1);
    CHECK(rows[k].epsilon == 0.05);
  }
  CHECK(outcome.trajectory_a.budgets.size() == 5);
}

TEST_CASE("auto_delta mode emits the margin search result") {
  const auto dir = temp_dir("autodelta");
  auto config = minimal_config(dir);
  config.epsilon_mode = ftl::report::EpsilonMode::auto_delta;
  config.n_runs = 6;
  const auto outcome = ftl::report::run_config(config);
  CHECK(fs::exists(dir / "margin_search.json"));
  REQUIRE(outcome.margin_search.has_value());
  CHECK(outcome.margin_search->trace.size() <= 7);
}

TEST_CASE("re-parsed trajectory rows re-validate against the metrics module") {
  const auto dir = temp_dir("revalidate");
  ftl::report::run_config(minimal_config(dir));
  const auto rows = ftl::report::read_trajectory_csv(dir / "trajectory_b.csv");
  for (const auto& r : rows) {
    CHECK(r.ft_stat == doctest::Approx(std::max(r.p_lower, r.p_upper)).epsilon(1e-11));
    CHECK(r.ft_pass == (r.ft_stat < 0.05));
    CHECK(r.p_two_sided >= 0.0);
    CHECK(r.p_two_sided <= 1.0);
  }
}

TEST_CASE("run_config rejects single-run campaigns") {
  auto config = minimal_config(temp_dir("n1"));
  config.n_runs = 1;
  CHECK_THROWS_WITH_AS(ftl::report::run_config(config),
                       doctest::Contains("tests undefined for N<2"), std::invalid_argument);
}

TEST_CASE("run_config rejects budgets beyond the pool") {
  auto config = minimal_config(temp_dir("budget"));
  config.max_budget = 21;
  CHECK_THROWS_AS(ftl::report::run_config(config), std::invalid_argument);
}

TEST_CASE("long format covers both estimators and all series") {
  const auto dir = temp_dir("long");
  ftl::report::run_config(minimal_config(dir));
  const auto csv = ftl::report::render_long_format(dir, "csv");
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 1 + 2 * 9 * 5);  // header + estimators * series * budgets
  CHECK(csv.find("RS1.mean,1,") != std::string::npos);
  CHECK(csv.find("RS2.ft_pass,5,") != std::string::npos);

  const auto json_text = ftl::report::render_long_format(dir, "json");
  CHECK(json_text.find("\"series\"") != std::string::npos);
  CHECK_THROWS_AS(ftl::report::render_long_format(dir, "xml"), std::invalid_argument);
}

TEST_CASE("campaign config parser validates the schema") {
  const auto dir = temp_dir("config");
  auto write = [&dir](const std::string& name, const std::string& text) {
    std::ofstream out(dir / name);
    out << text;
    return dir / name;
  };

  const auto good = write("good.json", R"({
    "schema": 1,
    "pool": {"synth": {"target_accuracy": 0.7, "size": 30, "seed": 1}},
    "estimator_a": {"kind": "random_sampling"},
    "estimator_b": {"kind": "random_sampling", "seed": 1},
    "n_runs": 4, "max_budget": 6, "alpha": 0.05,
    "epsilon": {"mode": "fixed", "value": 0.02},
    "base_seed": 2, "out_dir": "out"
  })");
  const auto config = ftl::report::parse_campaign_config(good);
  CHECK(config.n_runs == 4);
  CHECK(config.estimator_a.label == "A");
  CHECK(config.out_dir == dir / "out");

  const auto bad_schema = write("bad_schema.json", R"({"schema": 2})");
  CHECK_THROWS_AS(ftl::report::parse_campaign_config(bad_schema), std::invalid_argument);

  const auto bad_kind = write("bad_kind.json", R"({
    "schema": 1,
    "pool": {"synth": {"target_accuracy": 0.7, "size": 30}},
    "estimator_a": {"kind": "surrogate"},
    "estimator_b": {"kind": "random_sampling"},
    "epsilon": {"mode": "fixed", "value": 0.02},
    "out_dir": "out"
  })");
  CHECK_THROWS_WITH_AS(ftl::report::parse_campaign_config(bad_kind),
                       doctest::Contains("unknown estimator kind"), std::invalid_argument);

  const auto both_pools = write("both_pools.json", R"({
    "schema": 1,
    "pool": {"path": "x.json", "synth": {"target_accuracy": 0.7, "size": 30}},
    "estimator_a": {"kind": "random_sampling"},
    "estimator_b": {"kind": "random_sampling"},
    "epsilon": {"mode": "fixed", "value": 0.02},
    "out_dir": "out"
  })");
  CHECK_THROWS_AS(ftl::report::parse_campaign_config(both_pools), std::invalid_argument);
}
