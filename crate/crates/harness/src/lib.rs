//! Benchmark harness for the regression-ensemble differential evolution
//! optimizer: experiment planning, execution, and report generation. The
//! `rede` binary is a thin CLI over these modules.

pub mod config;
pub mod error;
pub mod format;
pub mod plan;
pub mod report;
pub mod runner;

pub use config::{parse_config_file, resolve_plan, Settings};
pub use error::{Error, Result};
pub use format::{published, sci};
pub use plan::{derive_seed, ExperimentPlan, RunTask, DEFAULT_BASE_SEED};
pub use report::{collect_cells, rank_report, render_summary, RankReport, SUMMARY_HEADER};
pub use runner::{execute_plan, replay, ExperimentOutcome, RunRecord, RUNS_HEADER};
