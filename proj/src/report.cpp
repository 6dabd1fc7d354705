#include "ftl/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ftl::report {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": invalid JSON: " + std::string(e.what()));
  }
}

const json& require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key))
    throw std::invalid_argument(where + ": missing required field '" + key + "'");
  return obj.at(key);
}

pool::SynthConfig parse_synth(const json& obj, const std::string& where) {
  pool::SynthConfig synth;
  synth.name = obj.value("name", std::string("synthetic"));
  synth.target_accuracy = require_field(obj, "target_accuracy", where).get<double>();
  synth.size = require_field(obj, "size", where).get<std::size_t>();
  synth.seed = obj.value("seed", std::uint64_t{0});
  synth.with_confidence = obj.value("with_confidence", true);
  if (obj.contains("clusters") && !obj["clusters"].is_null()) {
    const auto& c = obj["clusters"];
    synth.clusters.count = c.value("count", 0);
    synth.clusters.embedding_dim = c.value("embedding_dim", 8);
    synth.clusters.accuracy_spread = c.value("accuracy_spread", 0.15);
    synth.clusters.center_scale = c.value("center_scale", 10.0);
    synth.clusters.cluster_std = c.value("cluster_std", 1.0);
  }
  return synth;
}

EstimatorSpec parse_estimator(const json& obj, const std::string& where,
                              const std::string& default_label) {
  EstimatorSpec spec;
  spec.label = obj.value("label", default_label);
  const auto kind = require_field(obj, "kind", where).get<std::string>();
  if (kind == "random_sampling") {
    spec.kind = estimators::Kind::random_sampling;
  } else if (kind == "active_bayes") {
    spec.kind = estimators::Kind::active_bayes;
  } else {
    throw std::invalid_argument(where + ": unknown estimator kind '" + kind +
                                "' (expected random_sampling or active_bayes)");
  }
  if (obj.contains("prior")) {
    const auto& p = obj["prior"];
    if (p.is_string()) {
      const auto s = p.get<std::string>();
      if (s == "uninformed") {
        spec.prior.kind = estimators::Prior::Kind::uninformed;
      } else if (s == "informed") {
        spec.prior.kind = estimators::Prior::Kind::informed;
      } else {
        throw std::invalid_argument(where + ": unknown prior '" + s + "'");
      }
    } else {
      const auto s = require_field(p, "kind", where + ".prior").get<std::string>();
      if (s == "informed") {
        spec.prior.kind = estimators::Prior::Kind::informed;
      } else if (s == "uninformed") {
        spec.prior.kind = estimators::Prior::Kind::uninformed;
      } else {
        throw std::invalid_argument(where + ": unknown prior '" + s + "'");
      }
      spec.prior.strength = p.value("strength", 2.0);
    }
  }
  spec.neighbor_k = obj.value("neighbor_k", 10);
  if (obj.contains("groups") && !obj["groups"].is_null()) {
    const auto& g = obj["groups"];
    if (g.is_string()) {
      if (g.get<std::string>() != "auto")
        throw std::invalid_argument(where + ": groups must be \"auto\" or an integer count");
    } else if (g.is_number_integer()) {
      spec.fixed_group_count = g.get<int>();
    } else {
      throw std::invalid_argument(where + ": groups must be \"auto\" or an integer count");
    }
  }
  spec.seed = obj.value("seed", std::uint64_t{0});
  return spec;
}

json estimator_to_json(const EstimatorSpec& spec) {
  json out;
  out["label"] = spec.label;
  out["kind"] =
      spec.kind == estimators::Kind::random_sampling ? "random_sampling" : "active_bayes";
  if (spec.kind == estimators::Kind::active_bayes) {
    if (spec.prior.kind == estimators::Prior::Kind::uninformed) {
      out["prior"] = "uninformed";
    } else {
      out["prior"] = {{"kind", "informed"}, {"strength", spec.prior.strength}};
    }
    out["neighbor_k"] = spec.neighbor_k;
    out["groups"] =
        spec.fixed_group_count.has_value() ? json(*spec.fixed_group_count) : json("auto");
    out["seed"] = spec.seed;
  }
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

constexpr const char* kTrajectoryHeader =
    "budget,mean,sample_std,rmse,p_two_sided,p_lower,p_upper,ft_stat,ft_pass,epsilon";

std::string bool_text(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s, const std::string& where) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument(where + ": expected true/false, got '" + s + "'");
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

CampaignConfig parse_campaign_config_impl(const std::filesystem::path& path) {
  const json cfg = load_json(path);
  const std::string where = path.string();
  if (require_field(cfg, "schema", where).get<int>() != 1)
    throw std::invalid_argument(where + ": unsupported schema (expected 1)");

  CampaignConfig out;
  const auto& pool_obj = require_field(cfg, "pool", where);
  const bool has_path = pool_obj.contains("path") && !pool_obj["path"].is_null();
  const bool has_synth = pool_obj.contains("synth") && !pool_obj["synth"].is_null();
  if (has_path == has_synth)
    throw std::invalid_argument(where + ": pool needs exactly one of 'path' or 'synth'");
  if (has_path) {
    std::filesystem::path p = pool_obj["path"].get<std::string>();
    out.pool_source.path = p.is_absolute() ? p : path.parent_path() / p;
  } else {
    out.pool_source.synth = parse_synth(pool_obj["synth"], where + ".pool.synth");
  }

  out.estimator_a = parse_estimator(require_field(cfg, "estimator_a", where),
                                    where + ".estimator_a", "A");
  out.estimator_b = parse_estimator(require_field(cfg, "estimator_b", where),
                                    where + ".estimator_b", "B");

  out.n_runs = cfg.value("n_runs", std::size_t{100});
  out.max_budget = cfg.value("max_budget", std::size_t{100});
  out.alpha = cfg.value("alpha", 0.05);
  out.base_seed = cfg.value("base_seed", std::uint64_t{0});
  out.independent_budgets = cfg.value("independent_budgets", false);

  const auto& eps = require_field(cfg, "epsilon", where);
  const auto mode = require_field(eps, "mode", where + ".epsilon").get<std::string>();
  if (mode == "fixed") {
    out.epsilon_mode = EpsilonMode::fixed;
    out.epsilon = require_field(eps, "value", where + ".epsilon").get<double>();
  } else if (mode == "dynamic") {
    out.epsilon_mode = EpsilonMode::dynamic_delta;
    out.delta = require_field(eps, "delta", where + ".epsilon").get<double>();
  } else if (mode == "auto_delta") {
    out.epsilon_mode = EpsilonMode::auto_delta;
    out.resolution = eps.value("resolution", 0.01);
    if (!(out.resolution > 0.0))
      throw std::invalid_argument(where + ": resolution must be positive");
  } else {
    throw std::invalid_argument(where + ": epsilon mode must be fixed, dynamic or auto_delta");
  }

  std::filesystem::path out_dir = require_field(cfg, "out_dir", where).get<std::string>();
  out.out_dir = out_dir.is_absolute() ? out_dir : path.parent_path() / out_dir;

  if (out.n_runs < 2) throw std::invalid_argument(where + ": tests undefined for N<2");
  if (out.max_budget < 1) throw std::invalid_argument(where + ": max_budget must be >= 1");
  if (!(out.alpha > 0.0) || !(out.alpha < 1.0))
    throw std::invalid_argument(where + ": alpha must lie in (0, 1)");
  if (out.epsilon_mode == EpsilonMode::fixed && out.epsilon < 0.0)
    throw std::invalid_argument(where + ": epsilon must be non-negative");
  if (out.epsilon_mode == EpsilonMode::dynamic_delta && out.delta < 0.0)
    throw std::invalid_argument(where + ": delta must be non-negative");
  return out;
}

SimulateConfig parse_simulate_config_impl(const std::filesystem::path& path) {
  const json cfg = load_json(path);
  const std::string where = path.string();
  if (require_field(cfg, "schema", where).get<int>() != 1)
    throw std::invalid_argument(where + ": unsupported schema (expected 1)");
  SimulateConfig out;
  out.synth = parse_synth(require_field(cfg, "synth", where), where + ".synth");
  std::filesystem::path out_dir = require_field(cfg, "out_dir", where).get<std::string>();
  out.out_dir = out_dir.is_absolute() ? out_dir : path.parent_path() / out_dir;
  return out;
}

}  // namespace

// Wrong-typed config fields surface as json::type_error; fold them into
// validation errors so the CLI exits 1, not 2.
CampaignConfig parse_campaign_config(const std::filesystem::path& path) {
  try {
    return parse_campaign_config_impl(path);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

SimulateConfig parse_simulate_config(const std::filesystem::path& path) {
  try {
    return parse_simulate_config_impl(path);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

ComparisonTable build_comparison(const harness::Trajectory& a, const harness::Trajectory& b,
                                 const std::string& dataset) {
  if (a.budgets.size() != b.budgets.size())
    throw std::invalid_argument("build_comparison: trajectories cover different budgets");
  ComparisonTable table;
  table.rows.reserve(a.budgets.size());
  for (std::size_t i = 0; i < a.budgets.size(); ++i) {
    const auto& ra = a.budgets[i].report;
    const auto& rb = b.budgets[i].report;
    ComparisonRow row;
    row.dataset = dataset;
    row.budget = a.budgets[i].summary.budget;
    row.p_value_a = ra.p_two_sided;
    row.p_value_b = rb.p_two_sided;
    row.rmse_a = ra.rmse;
    row.rmse_b = rb.rmse;
    row.ft_stat_a = ra.ft_stat;
    row.ft_stat_b = rb.ft_stat;
    row.ft_pass_a = ra.ft_pass;
    row.ft_pass_b = rb.ft_pass;
    // Higher p-value wins; lower RMSE wins; any tie means no conflict.
    const int p_winner = row.p_value_a > row.p_value_b ? 1 : (row.p_value_a < row.p_value_b ? -1 : 0);
    const int rmse_winner = row.rmse_a < row.rmse_b ? 1 : (row.rmse_a > row.rmse_b ? -1 : 0);
    row.conflict = p_winner != 0 && rmse_winner != 0 && p_winner != rmse_winner;
    table.rows.push_back(std::move(row));
  }
  return table;
}

ComparisonTable build_comparison(const std::vector<TrajectoryRow>& a,
                                 const std::vector<TrajectoryRow>& b,
                                 const std::string& dataset) {
  if (a.size() != b.size())
    throw std::invalid_argument("build_comparison: trajectories cover different budgets");
  ComparisonTable table;
  table.rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].budget != b[i].budget)
      throw std::invalid_argument("build_comparison: mismatched budgets");
    ComparisonRow row;
    row.dataset = dataset;
    row.budget = a[i].budget;
    row.p_value_a = a[i].p_two_sided;
    row.p_value_b = b[i].p_two_sided;
    row.rmse_a = a[i].rmse;
    row.rmse_b = b[i].rmse;
    row.ft_stat_a = a[i].ft_stat;
    row.ft_stat_b = b[i].ft_stat;
    row.ft_pass_a = a[i].ft_pass;
    row.ft_pass_b = b[i].ft_pass;
    const int p_winner = row.p_value_a > row.p_value_b ? 1 : (row.p_value_a < row.p_value_b ? -1 : 0);
    const int rmse_winner = row.rmse_a < row.rmse_b ? 1 : (row.rmse_a > row.rmse_b ? -1 : 0);
    row.conflict = p_winner != 0 && rmse_winner != 0 && p_winner != rmse_winner;
    table.rows.push_back(std::move(row));
  }
  return table;
}

double conflict_rate(const ComparisonTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("conflict_rate: empty table");
  std::size_t conflicts = 0;
  for (const auto& row : table.rows) conflicts += row.conflict ? 1 : 0;
  return static_cast<double>(conflicts) / static_cast<double>(table.rows.size());
}

void write_trajectory_csv(const std::filesystem::path& path, const harness::Trajectory& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kTrajectoryHeader << "\n";
  for (const auto& cell : t.budgets) {
    const auto& r = cell.report;
    out << cell.summary.budget << ',' << format_number(cell.summary.mean) << ','
        << format_number(cell.summary.sample_std.value_or(0.0)) << ','
        << format_number(r.rmse) << ',' << format_number(r.p_two_sided) << ','
        << format_number(r.p_lower) << ',' << format_number(r.p_upper) << ','
        << format_number(r.ft_stat) << ',' << bool_text(r.ft_pass) << ','
        << format_number(r.epsilon_used) << "\n";
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trajectory: " + path.string());
  std::string line;
  if (!std::getline(in, line) || split_line(line) != split_line(kTrajectoryHeader))
    throw std::invalid_argument(path.string() + ": unexpected trajectory header");

  std::vector<TrajectoryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_line(line);
    const std::string where = path.string() + " line " + std::to_string(line_no);
    if (f.size() != 10) throw std::invalid_argument(where + ": expected 10 fields");
    TrajectoryRow row;
    try {
      row.budget = std::stoul(f[0]);
      row.mean = std::stod(f[1]);
      row.sample_std = std::stod(f[2]);
      row.rmse = std::stod(f[3]);
      row.p_two_sided = std::stod(f[4]);
      row.p_lower = std::stod(f[5]);
      row.p_upper = std::stod(f[6]);
      row.ft_stat = std::stod(f[7]);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": malformed number");
    }
    row.ft_pass = parse_bool(f[8], where);
    try {
      row.epsilon = std::stod(f[9]);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": malformed number");
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw std::invalid_argument(path.string() + ": no data rows");
  return rows;
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "dataset,budget,p_value_a,p_value_b,rmse_a,rmse_b,ft_stat_a,ft_stat_b,"
         "ft_pass_a,ft_pass_b,conflict\n";
  for (const auto& row : table.rows) {
    out << row.dataset << ',' << row.budget << ',' << format_number(row.p_value_a) << ','
        << format_number(row.p_value_b) << ',' << format_number(row.rmse_a) << ','
        << format_number(row.rmse_b) << ',' << format_number(row.ft_stat_a) << ','
        << format_number(row.ft_stat_b) << ',' << bool_text(row.ft_pass_a) << ','
        << bool_text(row.ft_pass_b) << ',' << bool_text(row.conflict) << "\n";
  }
}

void write_margin_search_json(const std::filesystem::path& path,
                              const margin::MarginSearchResult& result, double resolution) {
  json out;
  out["delta_star"] = result.delta_star.has_value() ? json(*result.delta_star) : json(nullptr);
  out["resolution"] = resolution;
  out["iterations"] = result.trace.size();
  out["bracket"] = {{"low", result.low}, {"high", result.high}};
  out["schedule_delta"] = result.schedule_delta;
  auto trace = json::array();
  for (const auto& e : result.trace) {
    json entry;
    entry["delta"] = e.delta;
    entry["distinguished"] = e.distinguished;
    entry["first_divergent_budget"] =
        e.first_divergent_budget == 0 ? json(nullptr) : json(e.first_divergent_budget);
    entry["branch"] = margin::to_string(e.branch);
    entry["low"] = e.low;
    entry["high"] = e.high;
    trace.push_back(entry);
  }
  out["trace"] = trace;
  out["epsilon_a"] = result.epsilon_a;
  out["epsilon_b"] = result.epsilon_b;
  out["pass_a"] = result.pass_a;
  out["pass_b"] = result.pass_b;

  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << out.dump(2) << "\n";
}

CampaignOutcome run_config(const CampaignConfig& config) {
  if (config.n_runs < 2) throw std::invalid_argument("tests undefined for N<2");

  CampaignOutcome outcome;
  outcome.pool = config.pool_source.path.has_value()
                     ? pool::load_pool(*config.pool_source.path)
                     : pool::synth_pool(*config.pool_source.synth);
  const auto& p = outcome.pool;
  if (config.max_budget > p.size())
    throw std::invalid_argument("max_budget " + std::to_string(config.max_budget) +
                                " exceeds pool size " + std::to_string(p.size()));

  auto to_config = [&p](const EstimatorSpec& spec) {
    estimators::EstimatorConfig cfg;
    cfg.kind = spec.kind;
    cfg.prior = spec.prior;
    cfg.neighbor_k = spec.neighbor_k;
    cfg.seed = spec.seed;
    if (spec.kind == estimators::Kind::active_bayes && spec.fixed_group_count.has_value()) {
      const auto points = grouping::collect_embeddings(p);
      cfg.groups = grouping::kmeans(points, *spec.fixed_group_count, spec.seed);
    }
    return cfg;
  };

  const auto runs_a = harness::run_campaign(p, to_config(config.estimator_a), config.n_runs,
                                            config.max_budget, config.base_seed,
                                            config.independent_budgets);
  const auto runs_b = harness::run_campaign(p, to_config(config.estimator_b), config.n_runs,
                                            config.max_budget, config.base_seed,
                                            config.independent_budgets);

  const auto summaries_a = harness::build_summaries(runs_a);
  const auto summaries_b = harness::build_summaries(runs_b);

  harness::EpsilonSchedule schedule_a = harness::EpsilonSchedule::fixed(0.0);
  harness::EpsilonSchedule schedule_b = schedule_a;
  switch (config.epsilon_mode) {
    case EpsilonMode::fixed:
      schedule_a = harness::EpsilonSchedule::fixed(config.epsilon);
      schedule_b = schedule_a;
      break;
    case EpsilonMode::dynamic_delta: {
      std::vector<double> eps_a;
      std::vector<double> eps_b;
      eps_a.reserve(summaries_a.size());
      eps_b.reserve(summaries_b.size());
      for (std::size_t i = 0; i < summaries_a.size(); ++i) {
        eps_a.push_back(margin::dynamic_epsilon(config.delta, summaries_a[i], config.alpha));
        eps_b.push_back(margin::dynamic_epsilon(config.delta, summaries_b[i], config.alpha));
      }
      schedule_a = harness::EpsilonSchedule::per_budget(std::move(eps_a));
      schedule_b = harness::EpsilonSchedule::per_budget(std::move(eps_b));
      break;
    }
    case EpsilonMode::auto_delta: {
      outcome.margin_search =
          margin::search_margin(summaries_a, summaries_b, p.ground_truth, config.alpha,
                                config.resolution);
      schedule_a = harness::EpsilonSchedule::per_budget(outcome.margin_search->epsilon_a);
      schedule_b = harness::EpsilonSchedule::per_budget(outcome.margin_search->epsilon_b);
      break;
    }
  }

  outcome.trajectory_a = harness::summarize_campaign(runs_a, p.ground_truth, config.alpha,
                                                     schedule_a, config.estimator_a.label);
  outcome.trajectory_b = harness::summarize_campaign(runs_b, p.ground_truth, config.alpha,
                                                     schedule_b, config.estimator_b.label);
  outcome.comparison = build_comparison(outcome.trajectory_a, outcome.trajectory_b, p.name);

  std::filesystem::create_directories(config.out_dir);
  write_trajectory_csv(config.out_dir / "trajectory_a.csv", outcome.trajectory_a);
  write_trajectory_csv(config.out_dir / "trajectory_b.csv", outcome.trajectory_b);
  write_comparison_csv(config.out_dir / "comparison.csv", outcome.comparison);
  if (outcome.margin_search.has_value())
    write_margin_search_json(config.out_dir / "margin_search.json", *outcome.margin_search,
                             config.resolution);

  json manifest;
  manifest["schema"] = 1;
  manifest["pool"] = {{"name", p.name},
                      {"size", p.size()},
                      {"ground_truth", p.ground_truth},
                      {"has_embeddings", p.has_embeddings()},
                      {"has_confidences", p.has_confidences()}};
  if (config.pool_source.path.has_value()) {
    manifest["pool"]["source"] = config.pool_source.path->string();
  } else {
    const auto& s = *config.pool_source.synth;
    manifest["pool"]["synth"] = {{"name", s.name},
                                 {"target_accuracy", s.target_accuracy},
                                 {"size", s.size},
                                 {"seed", s.seed},
                                 {"with_confidence", s.with_confidence},
                                 {"clusters",
                                  {{"count", s.clusters.count},
                                   {"embedding_dim", s.clusters.embedding_dim},
                                   {"accuracy_spread", s.clusters.accuracy_spread},
                                   {"center_scale", s.clusters.center_scale},
                                   {"cluster_std", s.clusters.cluster_std}}}};
  }
  manifest["estimator_a"] = estimator_to_json(config.estimator_a);
  manifest["estimator_b"] = estimator_to_json(config.estimator_b);
  manifest["n_runs"] = config.n_runs;
  manifest["max_budget"] = config.max_budget;
  manifest["alpha"] = config.alpha;
  manifest["base_seed"] = config.base_seed;
  manifest["independent_budgets"] = config.independent_budgets;
  switch (config.epsilon_mode) {
    case EpsilonMode::fixed:
      manifest["epsilon"] = {{"mode", "fixed"}, {"value", config.epsilon}};
      break;
    case EpsilonMode::dynamic_delta:
      manifest["epsilon"] = {{"mode", "dynamic"}, {"delta", config.delta}};
      break;
    case EpsilonMode::auto_delta:
      manifest["epsilon"] = {{"mode", "auto_delta"},
                             {"resolution", config.resolution},
                             {"delta_star", outcome.margin_search->delta_star.has_value()
                                                ? json(*outcome.margin_search->delta_star)
                                                : json(nullptr)}};
      break;
  }
  manifest["results"] = {{"conflict_rate", conflict_rate(outcome.comparison)}};

  std::ofstream file(config.out_dir / "manifest.json");
  if (!file) throw std::runtime_error("cannot write " + (config.out_dir / "manifest.json").string());
  file << manifest.dump(2) << "\n";
  return outcome;
}

std::string render_long_format(const std::filesystem::path& result_dir,
                               const std::string& format) {
  if (format != "csv" && format != "json")
    throw std::invalid_argument("report format must be csv or json");

  std::string label_a = "A";
  std::string label_b = "B";
  const auto manifest_path = result_dir / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    const json manifest = load_json(manifest_path);
    if (manifest.contains("estimator_a")) label_a = manifest["estimator_a"].value("label", "A");
    if (manifest.contains("estimator_b")) label_b = manifest["estimator_b"].value("label", "B");
  }

  struct Series {
    std::string label;
    std::vector<TrajectoryRow> rows;
  };
  std::vector<Series> series;
  series.push_back({label_a, read_trajectory_csv(result_dir / "trajectory_a.csv")});
  series.push_back({label_b, read_trajectory_csv(result_dir / "trajectory_b.csv")});

  const std::vector<std::pair<std::string, double TrajectoryRow::*>> numeric_cols = {
      {"mean", &TrajectoryRow::mean},         {"sample_std", &TrajectoryRow::sample_std},
      {"rmse", &TrajectoryRow::rmse},         {"p_two_sided", &TrajectoryRow::p_two_sided},
      {"p_lower", &TrajectoryRow::p_lower},   {"p_upper", &TrajectoryRow::p_upper},
      {"ft_stat", &TrajectoryRow::ft_stat},   {"epsilon", &TrajectoryRow::epsilon}};

  if (format == "csv") {
    std::ostringstream out;
    out << "series,budget,value\n";
    for (const auto& s : series) {
      for (const auto& [name, member] : numeric_cols) {
        for (const auto& row : s.rows)
          out << s.label << '.' << name << ',' << row.budget << ','
              << format_number(row.*member) << "\n";
      }
      for (const auto& row : s.rows)
        out << s.label << ".ft_pass," << row.budget << ',' << (row.ft_pass ? 1 : 0) << "\n";
    }
    return out.str();
  }

  auto rows = json::array();
  for (const auto& s : series) {
    for (const auto& [name, member] : numeric_cols) {
      for (const auto& row : s.rows)
        rows.push_back({{"series", s.label + "." + name},
                        {"budget", row.budget},
                        {"value", row.*member}});
    }
    for (const auto& row : s.rows)
      rows.push_back({{"series", s.label + ".ft_pass"},
                      {"budget", row.budget},
                      {"value", row.ft_pass ? 1 : 0}});
  }
  return rows.dump(2) + "\n";
}

}  // namespace ftl::report
