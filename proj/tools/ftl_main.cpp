#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ftl/pool.hpp"
#include "ftl/report.hpp"

namespace {

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  bool quiet = false;
};

void note(const GlobalFlags& flags, const std::string& message) {
  if (!flags.quiet) std::cerr << message << "\n";
}

// FTL_SEED wins over --seed, which wins over the config value.
std::optional<std::uint64_t> effective_seed(const GlobalFlags& flags) {
  if (const char* env = std::getenv("FTL_SEED")) {
    return std::stoull(env);
  }
  return flags.seed;
}

int run_simulate(const GlobalFlags& flags, const std::filesystem::path& config_path) {
  auto config = ftl::report::parse_simulate_config(config_path);
  if (const auto seed = effective_seed(flags)) config.synth.seed = *seed;
  const auto pool = ftl::pool::synth_pool(config.synth);
  ftl::pool::save_pool(pool, config.out_dir);
  note(flags, "wrote pool '" + pool.name + "' (" + std::to_string(pool.size()) +
                  " records, ground truth " + ftl::report::format_number(pool.ground_truth) +
                  ") to " + config.out_dir.string());
  return 0;
}

int run_campaign_command(const GlobalFlags& flags, const std::filesystem::path& config_path,
                         bool force_auto_delta) {
  auto config = ftl::report::parse_campaign_config(config_path);
  if (const auto seed = effective_seed(flags)) config.base_seed = *seed;
  if (flags.alpha.has_value()) config.alpha = *flags.alpha;
  if (force_auto_delta) config.epsilon_mode = ftl::report::EpsilonMode::auto_delta;

  const auto outcome = ftl::report::run_config(config);
  note(flags, "campaign written to " + config.out_dir.string());
  if (outcome.margin_search.has_value()) {
    const auto& ms = *outcome.margin_search;
    note(flags, ms.delta_star.has_value()
                    ? "delta_star = " + ftl::report::format_number(*ms.delta_star)
                    : "delta_star = null (estimators indistinguishable)");
  }
  note(flags, "conflict_rate = " +
                  ftl::report::format_number(ftl::report::conflict_rate(outcome.comparison)));
  return 0;
}

int run_compare(const GlobalFlags& flags, const std::filesystem::path& a_path,
                const std::filesystem::path& b_path, const std::filesystem::path& out_dir,
                const std::string& dataset) {
  const auto rows_a = ftl::report::read_trajectory_csv(a_path);
  const auto rows_b = ftl::report::read_trajectory_csv(b_path);
  const auto table = ftl::report::build_comparison(rows_a, rows_b, dataset);
  std::filesystem::create_directories(out_dir);
  ftl::report::write_comparison_csv(out_dir / "comparison.csv", table);
  const double rate = ftl::report::conflict_rate(table);
  note(flags, "conflict_rate = " + ftl::report::format_number(rate));
  std::cout << ftl::report::format_number(rate) << "\n";
  return 0;
}

int run_report(const std::filesystem::path& in_dir, const std::string& format) {
  std::cout << ftl::report::render_long_format(in_dir, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fault-tolerant evaluation toolkit for sample-efficient performance estimators"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  double alpha_value = 0.0;
  auto* seed_opt = app.add_option("--seed", seed_value, "override the configured base seed");
  auto* alpha_opt = app.add_option("--alpha", alpha_value, "override the configured alpha");
  app.add_flag("--quiet", flags.quiet, "suppress informational output");

  std::string config_path;
  std::string a_path;
  std::string b_path;
  std::string out_dir;
  std::string in_dir;
  std::string dataset = "pool";
  std::string format = "csv";

  auto* simulate = app.add_subcommand("simulate", "generate and persist a synthetic pool");
  simulate->add_option("--config", config_path, "simulate config JSON")->required();

  auto* run = app.add_subcommand("run", "run a full campaign from a config");
  run->add_option("--config", config_path, "campaign config JSON")->required();

  auto* compare = app.add_subcommand("compare", "build a comparison table from two trajectories");
  compare->add_option("--a", a_path, "trajectory CSV for estimator A")->required();
  compare->add_option("--b", b_path, "trajectory CSV for estimator B")->required();
  compare->add_option("--out", out_dir, "output directory")->required();
  compare->add_option("--name", dataset, "dataset label for the table");

  auto* delta_search = app.add_subcommand("delta-search", "campaign plus margin auto-selection");
  delta_search->add_option("--config", config_path, "campaign config JSON")->required();

  auto* report = app.add_subcommand("report", "re-emit plot-ready long-format data");
  report->add_option("--in", in_dir, "campaign result directory")->required();
  report->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (seed_opt->count() > 0) flags.seed = seed_value;
  if (alpha_opt->count() > 0) flags.alpha = alpha_value;

  try {
    if (simulate->parsed()) return run_simulate(flags, config_path);
    if (run->parsed()) return run_campaign_command(flags, config_path, false);
    if (compare->parsed()) return run_compare(flags, a_path, b_path, out_dir, dataset);
    if (delta_search->parsed()) return run_campaign_command(flags, config_path, true);
    if (report->parsed()) return run_report(in_dir, format);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
