//! Settings collection and precedence: flags override config-file values,
//! which override the built-in defaults (the full benchmark experiment).

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rede_core::{Algorithm, DeParams, FunctionId};

use crate::error::{Error, Result};
use crate::plan::{
    ExperimentPlan, RegressorOverrides, DEFAULT_BASE_SEED, DEFAULT_ESTIMATORS,
    DEFAULT_REPETITIONS,
};

/// One layer of settings; every field is optional so layers can be merged.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub algorithm: Option<Vec<String>>,
    pub function: Option<Vec<String>>,
    pub dim: Option<usize>,
    pub np: Option<usize>,
    pub f: Option<f64>,
    pub cr: Option<f64>,
    pub tmax: Option<u32>,
    pub budget: Option<u64>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub estimators: Option<usize>,
    pub learning_rate: Option<f64>,
    pub max_depth: Option<u32>,
    pub min_samples_split: Option<usize>,
    pub ridge_alpha: Option<f64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Settings {
    /// Field-wise precedence: values present in `self` win over `fallback`.
    pub fn or(self, fallback: Settings) -> Settings {
        Settings {
            algorithm: self.algorithm.or(fallback.algorithm),
            function: self.function.or(fallback.function),
            dim: self.dim.or(fallback.dim),
            np: self.np.or(fallback.np),
            f: self.f.or(fallback.f),
            cr: self.cr.or(fallback.cr),
            tmax: self.tmax.or(fallback.tmax),
            budget: self.budget.or(fallback.budget),
            runs: self.runs.or(fallback.runs),
            seed: self.seed.or(fallback.seed),
            estimators: self.estimators.or(fallback.estimators),
            learning_rate: self.learning_rate.or(fallback.learning_rate),
            max_depth: self.max_depth.or(fallback.max_depth),
            min_samples_split: self.min_samples_split.or(fallback.min_samples_split),
            ridge_alpha: self.ridge_alpha.or(fallback.ridge_alpha),
            jobs: self.jobs.or(fallback.jobs),
            out: self.out.or(fallback.out),
        }
    }
}

fn parse_value<T>(key: &str, value: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| Error::invalid(key, format!("`{}`: {e}", value.trim())))
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|token| token.trim().to_string())
        .filter(|token| !token.is_empty())
        .collect()
}

/// Parses a flat `key = value` config file. Keys mirror the CLI flags;
/// `#` starts a comment, blank lines are skipped, unknown keys are errors.
pub fn parse_config_file(path: &Path) -> Result<Settings> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut settings = Settings::default();
    for (line_number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::invalid(
                "config",
                format!(
                    "{}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    line_number + 1
                ),
            ));
        };
        let key = key.trim();
        match key {
            "algorithm" => settings.algorithm = Some(split_list(value)),
            "function" => settings.function = Some(split_list(value)),
            "dim" => settings.dim = Some(parse_value(key, value)?),
            "np" => settings.np = Some(parse_value(key, value)?),
            "f" => settings.f = Some(parse_value(key, value)?),
            "cr" => settings.cr = Some(parse_value(key, value)?),
            "tmax" => settings.tmax = Some(parse_value(key, value)?),
            "budget" => settings.budget = Some(parse_value(key, value)?),
            "runs" => settings.runs = Some(parse_value(key, value)?),
            "seed" => settings.seed = Some(parse_value(key, value)?),
            "estimators" => settings.estimators = Some(parse_value(key, value)?),
            "learning_rate" => settings.learning_rate = Some(parse_value(key, value)?),
            "max_depth" => settings.max_depth = Some(parse_value(key, value)?),
            "min_samples_split" => {
                settings.min_samples_split = Some(parse_value(key, value)?)
            }
            "ridge_alpha" => settings.ridge_alpha = Some(parse_value(key, value)?),
            "jobs" => settings.jobs = Some(parse_value(key, value)?),
            "out" => settings.out = Some(PathBuf::from(value.trim())),
            _ => {
                return Err(Error::invalid(
                    key,
                    format!("unknown config key at {}:{}", path.display(), line_number + 1),
                ));
            }
        }
    }
    Ok(settings)
}

fn parse_tokens<T>(key: &'static str, tokens: &[String]) -> Result<Vec<T>>
where
    T: FromStr<Err = rede_core::Error> + PartialEq,
{
    let mut parsed: Vec<T> = Vec::with_capacity(tokens.len());
    for token in tokens {
        let value = token
            .parse()
            .map_err(|e: rede_core::Error| Error::invalid(key, e.to_string()))?;
        // Repeating a token is harmless; the first occurrence fixes the order.
        if !parsed.contains(&value) {
            parsed.push(value);
        }
    }
    Ok(parsed)
}

/// Turns merged settings into a validated plan. Unset fields fall back to
/// the benchmark defaults: every algorithm, every function, D = 10,
/// NP = 10, F = 0.5, CR = 0.9, 1000 generations, a 10,000-evaluation
/// budget, 25 runs, 40 estimators.
pub fn resolve_plan(settings: Settings) -> Result<ExperimentPlan> {
    let algorithms: Vec<Algorithm> = match &settings.algorithm {
        Some(tokens) => parse_tokens("algorithm", tokens)?,
        None => Algorithm::full_set().to_vec(),
    };
    let functions: Vec<FunctionId> = match &settings.function {
        Some(tokens) => parse_tokens("function", tokens)?,
        None => FunctionId::ALL.to_vec(),
    };

    let dimension = settings.dim.unwrap_or(10);
    let params = DeParams {
        amplification_f: settings.f.unwrap_or(0.5),
        crossover_cr: settings.cr.unwrap_or(0.9),
        population_np: settings.np.unwrap_or(10),
        dimension_d: dimension,
        max_generations: settings.tmax.unwrap_or(1000),
    };
    let budget = settings
        .budget
        .unwrap_or(params.population_np as u64 * u64::from(params.max_generations));

    if let Some(depth) = settings.max_depth {
        if depth == 0 {
            return Err(Error::invalid("max_depth", "must be at least 1"));
        }
    }
    let overrides = RegressorOverrides {
        estimators: Some(settings.estimators.unwrap_or(DEFAULT_ESTIMATORS)),
        learning_rate: settings.learning_rate,
        max_depth: settings.max_depth,
        min_samples_split: settings.min_samples_split,
        ridge_alpha: settings.ridge_alpha,
    };
    let algorithms = algorithms
        .into_iter()
        .map(|algorithm| overrides.apply(algorithm))
        .collect();

    let plan = ExperimentPlan {
        algorithms,
        functions,
        dimension,
        repetitions: settings.runs.unwrap_or(DEFAULT_REPETITIONS),
        base_seed: settings.seed.unwrap_or(DEFAULT_BASE_SEED),
        params,
        budget,
        jobs: settings.jobs.unwrap_or(0),
        output_dir: settings.out.unwrap_or_else(|| PathBuf::from("results")),
    };
    plan.validate()?;
    Ok(plan)
}
