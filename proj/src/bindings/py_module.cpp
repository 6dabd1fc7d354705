#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ftl/estimators.hpp"
#include "ftl/grouping.hpp"
#include "ftl/harness.hpp"
#include "ftl/margin.hpp"
#include "ftl/metrics.hpp"
#include "ftl/pool.hpp"
#include "ftl/report.hpp"
#include "ftl/stats.hpp"

namespace py = pybind11;
using namespace ftl;

namespace {

grouping::PointMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  grouping::PointMatrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.data.reserve(m.rows * m.cols);
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw std::invalid_argument("points must be rectangular");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_ftl, m) {
  m.doc() = "fault-tolerant evaluation of sample-efficient performance estimators";

  // stats
  py::class_<stats::SampleStats>(m, "SampleStats")
      .def_readonly("n", &stats::SampleStats::n)
      .def_readonly("mean", &stats::SampleStats::mean)
      .def_readonly("sample_std", &stats::SampleStats::sample_std)
      .def_readonly("pop_var", &stats::SampleStats::pop_var);
  py::class_<stats::BetaMoments>(m, "BetaMoments")
      .def_readonly("mean", &stats::BetaMoments::mean)
      .def_readonly("variance", &stats::BetaMoments::variance);
  m.def("summarize", [](const std::vector<double>& v) { return stats::summarize(v); },
        py::arg("estimates"));
  m.def("t_survival", &stats::t_survival, py::arg("t_value"), py::arg("df"));
  m.def("t_critical", &stats::t_critical, py::arg("alpha"), py::arg("df"));
  m.def("beta_moments", &stats::beta_moments, py::arg("alpha_param"), py::arg("beta_param"));

  // metrics
  py::class_<metrics::ErrorDecomposition>(m, "ErrorDecomposition")
      .def_readonly("mse", &metrics::ErrorDecomposition::mse)
      .def_readonly("rmse", &metrics::ErrorDecomposition::rmse)
      .def_readonly("bias", &metrics::ErrorDecomposition::bias)
      .def_readonly("pop_var", &metrics::ErrorDecomposition::pop_var);
  py::class_<metrics::TostResult>(m, "TostResult")
      .def_readonly("p_lower", &metrics::TostResult::p_lower)
      .def_readonly("p_upper", &metrics::TostResult::p_upper)
      .def_readonly("ft_pass", &metrics::TostResult::ft_pass);
  py::class_<metrics::MetricReport>(m, "MetricReport")
      .def_readonly("mse", &metrics::MetricReport::mse)
      .def_readonly("rmse", &metrics::MetricReport::rmse)
      .def_readonly("bias", &metrics::MetricReport::bias)
      .def_readonly("pop_var", &metrics::MetricReport::pop_var)
      .def_readonly("p_two_sided", &metrics::MetricReport::p_two_sided)
      .def_readonly("p_lower", &metrics::MetricReport::p_lower)
      .def_readonly("p_upper", &metrics::MetricReport::p_upper)
      .def_readonly("ft_stat", &metrics::MetricReport::ft_stat)
      .def_readonly("ft_pass", &metrics::MetricReport::ft_pass)
      .def_readonly("epsilon_used", &metrics::MetricReport::epsilon_used)
      .def_readonly("alpha_used", &metrics::MetricReport::alpha_used);
  m.def("mse_rmse",
        [](const std::vector<double>& v, double truth) { return metrics::mse_rmse(v, truth); },
        py::arg("estimates"), py::arg("truth"));
  m.def("two_sided_test",
        [](const std::vector<double>& v, double truth) {
          return metrics::two_sided_test(stats::summarize(v), truth);
        },
        py::arg("estimates"), py::arg("truth"));
  m.def("ft_eval",
        [](const std::vector<double>& v, double truth, double epsilon, double alpha) {
          return metrics::ft_eval(stats::summarize(v), truth, epsilon, alpha);
        },
        py::arg("estimates"), py::arg("truth"), py::arg("epsilon"), py::arg("alpha") = 0.05);
  m.def("metric_report",
        [](const std::vector<double>& v, double truth, double epsilon, double alpha) {
          return metrics::evaluate(v, truth, epsilon, alpha);
        },
        py::arg("estimates"), py::arg("truth"), py::arg("epsilon"), py::arg("alpha") = 0.05);

  // pool
  py::class_<pool::PredictionRecord>(m, "PredictionRecord")
      .def(py::init([](std::string id, int correct, std::optional<double> confidence,
                       std::optional<std::vector<double>> embedding) {
             pool::PredictionRecord r;
             r.instance_id = std::move(id);
             r.correct = correct;
             r.confidence = confidence;
             r.embedding = std::move(embedding);
             return r;
           }),
           py::arg("instance_id"), py::arg("correct"), py::arg("confidence") = py::none(),
           py::arg("embedding") = py::none())
      .def_readonly("instance_id", &pool::PredictionRecord::instance_id)
      .def_readonly("correct", &pool::PredictionRecord::correct)
      .def_readonly("confidence", &pool::PredictionRecord::confidence)
      .def_readonly("embedding", &pool::PredictionRecord::embedding);
  py::class_<pool::EvaluationPool>(m, "EvaluationPool")
      .def_readonly("name", &pool::EvaluationPool::name)
      .def_readonly("records", &pool::EvaluationPool::records)
      .def_readonly("ground_truth", &pool::EvaluationPool::ground_truth)
      .def("__len__", &pool::EvaluationPool::size)
      .def("has_embeddings", &pool::EvaluationPool::has_embeddings)
      .def("has_confidences", &pool::EvaluationPool::has_confidences);
  py::class_<pool::ClusterSpec>(m, "ClusterSpec")
      .def(py::init<>())
      .def_readwrite("count", &pool::ClusterSpec::count)
      .def_readwrite("embedding_dim", &pool::ClusterSpec::embedding_dim)
      .def_readwrite("accuracy_spread", &pool::ClusterSpec::accuracy_spread)
      .def_readwrite("center_scale", &pool::ClusterSpec::center_scale)
      .def_readwrite("cluster_std", &pool::ClusterSpec::cluster_std);
  py::class_<pool::SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("name", &pool::SynthConfig::name)
      .def_readwrite("target_accuracy", &pool::SynthConfig::target_accuracy)
      .def_readwrite("size", &pool::SynthConfig::size)
      .def_readwrite("clusters", &pool::SynthConfig::clusters)
      .def_readwrite("with_confidence", &pool::SynthConfig::with_confidence)
      .def_readwrite("seed", &pool::SynthConfig::seed);
  m.def("make_pool", &pool::make_pool, py::arg("name"), py::arg("records"));
  m.def("load_pool", &pool::load_pool, py::arg("manifest_path"));
  m.def("save_pool", &pool::save_pool, py::arg("pool"), py::arg("dir"));
  m.def("synth_pool", &pool::synth_pool, py::arg("config"));

  // grouping
  py::class_<grouping::GroupAssignment>(m, "GroupAssignment")
      .def_readonly("group_count", &grouping::GroupAssignment::group_count)
      .def_readonly("labels", &grouping::GroupAssignment::labels)
      .def_readonly("weights", &grouping::GroupAssignment::weights)
      .def_readonly("centroids", &grouping::GroupAssignment::centroids);
  py::class_<grouping::DensityScores>(m, "DensityScores")
      .def_readonly("scores", &grouping::DensityScores::scores)
      .def_readonly("neighbor_k", &grouping::DensityScores::neighbor_k);
  m.def("kmeans",
        [](const std::vector<std::vector<double>>& points, int g, std::uint64_t seed) {
          return grouping::kmeans(to_matrix(points), g, seed);
        },
        py::arg("points"), py::arg("g"), py::arg("seed") = 0);
  m.def("silhouette",
        [](const std::vector<std::vector<double>>& points,
           const grouping::GroupAssignment& assignment) {
          return grouping::silhouette(to_matrix(points), assignment);
        },
        py::arg("points"), py::arg("assignment"));
  m.def("select_group_count",
        [](const std::vector<std::vector<double>>& points, const std::vector<int>& candidates,
           std::uint64_t seed) {
          return grouping::select_group_count(to_matrix(points), candidates, seed);
        },
        py::arg("points"), py::arg("candidates"), py::arg("seed") = 0);
  m.def("density_scores",
        [](const std::vector<std::vector<double>>& points, int neighbor_k) {
          return grouping::density_scores(to_matrix(points), neighbor_k);
        },
        py::arg("points"), py::arg("neighbor_k") = 10);

  // estimators
  py::enum_<estimators::Kind>(m, "EstimatorKind")
      .value("random_sampling", estimators::Kind::random_sampling)
      .value("active_bayes", estimators::Kind::active_bayes);
  py::class_<estimators::EstimatorConfig>(m, "EstimatorConfig")
      .def(py::init([](const std::string& kind, const std::string& prior, double prior_strength,
                       int neighbor_k, std::optional<grouping::GroupAssignment> groups,
                       std::uint64_t seed) {
             estimators::EstimatorConfig cfg;
             if (kind == "random_sampling") {
               cfg.kind = estimators::Kind::random_sampling;
             } else if (kind == "active_bayes") {
               cfg.kind = estimators::Kind::active_bayes;
             } else {
               throw std::invalid_argument("kind must be random_sampling or active_bayes");
             }
             if (prior == "uninformed") {
               cfg.prior.kind = estimators::Prior::Kind::uninformed;
             } else if (prior == "informed") {
               cfg.prior.kind = estimators::Prior::Kind::informed;
             } else {
               throw std::invalid_argument("prior must be uninformed or informed");
             }
             cfg.prior.strength = prior_strength;
             cfg.neighbor_k = neighbor_k;
             cfg.groups = std::move(groups);
             cfg.seed = seed;
             return cfg;
           }),
           py::arg("kind") = "random_sampling", py::arg("prior") = "uninformed",
           py::arg("prior_strength") = 2.0, py::arg("neighbor_k") = 10,
           py::arg("groups") = py::none(), py::arg("seed") = 0);
  py::class_<estimators::GroupPosterior>(m, "GroupPosterior")
      .def(py::init([](double alpha, double beta, double weight) {
             estimators::GroupPosterior g;
             g.alpha = alpha;
             g.beta = beta;
             g.weight = weight;
             return g;
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("weight") = 1.0)
      .def_readonly("alpha", &estimators::GroupPosterior::alpha)
      .def_readonly("beta", &estimators::GroupPosterior::beta)
      .def_readonly("weight", &estimators::GroupPosterior::weight)
      .def_readonly("members", &estimators::GroupPosterior::members)
      .def_readonly("labeled", &estimators::GroupPosterior::labeled);
  py::class_<estimators::TrajectoryRun>(m, "TrajectoryRun")
      .def_readonly("acquired", &estimators::TrajectoryRun::acquired)
      .def_readonly("estimates", &estimators::TrajectoryRun::estimates)
      .def_readonly("seed", &estimators::TrajectoryRun::seed);
  m.def("active_bayes_reward", &estimators::active_bayes_reward, py::arg("group"),
        py::arg("theta_sample"));
  m.def("run_random_sampling", &estimators::run_random_sampling, py::arg("pool"),
        py::arg("max_budget"), py::arg("seed"));
  m.def("run_active_bayes",
        py::overload_cast<const pool::EvaluationPool&, const estimators::EstimatorConfig&,
                          std::size_t, std::uint64_t>(&estimators::run_active_bayes),
        py::arg("pool"), py::arg("config"), py::arg("max_budget"), py::arg("seed"));

  // harness
  py::class_<harness::RunSummary>(m, "RunSummary")
      .def(py::init([](std::size_t budget, std::size_t n_runs, double mean,
                       std::optional<double> sample_std) {
             harness::RunSummary s;
             s.budget = budget;
             s.n_runs = n_runs;
             s.mean = mean;
             s.sample_std = sample_std;
             return s;
           }),
           py::arg("budget"), py::arg("n_runs"), py::arg("mean"), py::arg("sample_std"))
      .def_readonly("budget", &harness::RunSummary::budget)
      .def_readonly("n_runs", &harness::RunSummary::n_runs)
      .def_readonly("mean", &harness::RunSummary::mean)
      .def_readonly("sample_std", &harness::RunSummary::sample_std);
  py::class_<harness::BudgetMetrics>(m, "BudgetMetrics")
      .def_readonly("summary", &harness::BudgetMetrics::summary)
      .def_readonly("report", &harness::BudgetMetrics::report);
  py::class_<harness::Trajectory>(m, "Trajectory")
      .def_readonly("estimator_name", &harness::Trajectory::estimator_name)
      .def_readonly("ground_truth", &harness::Trajectory::ground_truth)
      .def_readonly("alpha", &harness::Trajectory::alpha)
      .def_readonly("budgets", &harness::Trajectory::budgets);
  m.def("run_campaign", &harness::run_campaign, py::arg("pool"), py::arg("config"),
        py::arg("n_runs"), py::arg("max_budget"), py::arg("base_seed"),
        py::arg("independent_budgets") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("build_summaries", &harness::build_summaries, py::arg("runs"));
  m.def("summarize_campaign",
        [](const std::vector<estimators::TrajectoryRun>& runs, double truth, double alpha,
           const std::variant<double, std::vector<double>>& epsilon, std::string name) {
          const auto schedule =
              std::holds_alternative<double>(epsilon)
                  ? harness::EpsilonSchedule::fixed(std::get<double>(epsilon))
                  : harness::EpsilonSchedule::per_budget(std::get<std::vector<double>>(epsilon));
          return harness::summarize_campaign(runs, truth, alpha, schedule, std::move(name));
        },
        py::arg("runs"), py::arg("truth"), py::arg("alpha"), py::arg("epsilon"),
        py::arg("name") = "estimator");

  // margin search
  py::class_<margin::TraceEntry>(m, "MarginTraceEntry")
      .def_readonly("delta", &margin::TraceEntry::delta)
      .def_readonly("distinguished", &margin::TraceEntry::distinguished)
      .def_readonly("first_divergent_budget", &margin::TraceEntry::first_divergent_budget)
      .def_property_readonly("branch",
                             [](const margin::TraceEntry& e) { return to_string(e.branch); })
      .def_readonly("low", &margin::TraceEntry::low)
      .def_readonly("high", &margin::TraceEntry::high);
  py::class_<margin::MarginSearchResult>(m, "MarginSearchResult")
      .def_readonly("delta_star", &margin::MarginSearchResult::delta_star)
      .def_readonly("trace", &margin::MarginSearchResult::trace)
      .def_readonly("low", &margin::MarginSearchResult::low)
      .def_readonly("high", &margin::MarginSearchResult::high)
      .def_readonly("schedule_delta", &margin::MarginSearchResult::schedule_delta)
      .def_readonly("epsilon_a", &margin::MarginSearchResult::epsilon_a)
      .def_readonly("epsilon_b", &margin::MarginSearchResult::epsilon_b)
      .def_readonly("pass_a", &margin::MarginSearchResult::pass_a)
      .def_readonly("pass_b", &margin::MarginSearchResult::pass_b);
  m.def("dynamic_epsilon", &margin::dynamic_epsilon, py::arg("delta"), py::arg("summary"),
        py::arg("alpha") = 0.05);
  m.def("search_margin",
        [](const std::vector<harness::RunSummary>& a, const std::vector<harness::RunSummary>& b,
           double truth, double alpha, double resolution) {
          return margin::search_margin(a, b, truth, alpha, resolution);
        },
        py::arg("summaries_a"), py::arg("summaries_b"), py::arg("truth"),
        py::arg("alpha") = 0.05, py::arg("resolution") = 0.01);

  // reports
  m.def("conflict_rate_from_csv",
        [](const std::filesystem::path& a, const std::filesystem::path& b) {
          const auto table = report::build_comparison(report::read_trajectory_csv(a),
                                                      report::read_trajectory_csv(b), "pool");
          return report::conflict_rate(table);
        },
        py::arg("trajectory_a"), py::arg("trajectory_b"));
}
