"""Fault-tolerant evaluation toolkit for sample-efficient performance estimators."""

from ftleval._ftl import (  # noqa: F401
    BetaMoments,
    ClusterSpec,
    DensityScores,
    ErrorDecomposition,
    EstimatorConfig,
    EvaluationPool,
    GroupAssignment,
    GroupPosterior,
    MarginSearchResult,
    MetricReport,
    PredictionRecord,
    RunSummary,
    SampleStats,
    SynthConfig,
    TostResult,
    Trajectory,
    TrajectoryRun,
    active_bayes_reward,
    beta_moments,
    build_summaries,
    conflict_rate_from_csv,
    density_scores,
    dynamic_epsilon,
    ft_eval,
    kmeans,
    load_pool,
    make_pool,
    mse_rmse,
    metric_report,
    run_active_bayes,
    run_campaign,
    run_random_sampling,
    save_pool,
    search_margin,
    select_group_count,
    silhouette,
    summarize,
    summarize_campaign,
    synth_pool,
    t_critical,
    t_survival,
    two_sided_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
