//! Differential evolution with a regression-assisted trial step.
//!
//! Each generation, every individual gets a test set of ten candidate
//! vectors (five mutation operators crossed with exponential and binomial
//! recombination) plus one validation vector from the classic rand/1/bin
//! strategy. A regressor fitted on that data proposes the actual trial
//! vector, which competes with the parent under standard greedy selection.
//! The crate also ships the five regressors (random forest, extremely
//! randomized trees, gradient boosting, a single CART tree, and ridge
//! regression), the five benchmark functions used by the harness, and the
//! rank statistics for comparing algorithms across functions.

pub mod engine;
pub mod error;
pub mod problems;
pub mod regression;
pub mod rng;
pub mod stats;
pub mod strategies;
pub mod types;

pub use engine::{
    run, run_batch, run_batch_sequential, run_classic_de, run_regression_de, select, Algorithm,
    RunConfig, RunResult,
};
pub use error::{Error, Result};
pub use problems::{evaluate, make_suite, BenchmarkFunction, EvalCounter, FunctionId};
pub use regression::{
    build_regression_vector, fit_regressor, FittedRegressor, RegressionDataset, RegressionVector,
    RegressorId, RegressorKind,
};
pub use rng::RngStream;
pub use stats::{
    bonferroni_dunn_cd, friedman_analysis, friedman_ranks, friedman_statistic, render_cd_diagram,
    summarize_runs, FriedmanAnalysis, FriedmanOutcome, FriedmanRanks, ResultsMatrix, SummaryStats,
};
pub use strategies::{
    apply_strategy, create_test_set, create_validation_vector, ensemble, CrossoverKind, Mutation,
    StrategyId, ENSEMBLE_SIZE, VALIDATION_ORDINAL,
};
pub use types::{
    clamp_to_bounds, init_population, sample_distinct_indices, Bounds, DeParams, Individual,
    Population, RealVector,
};
