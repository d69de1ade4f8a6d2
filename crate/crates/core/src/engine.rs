//! The two optimization loops: classic differential evolution and the
//! regression-ensemble variant.
//!
//! Both loops share the same skeleton. The population is initialized and
//! evaluated (NP evaluations, charged to the budget), then each generation
//! builds one trial per member, evaluates it once, and keeps the better of
//! parent and trial. Replacement is synchronous: all comparisons use the
//! generation-start population and the new population swaps in afterwards.
//! The initial population counts as the first generation, so the loop body
//! runs `max_generations - 1` times unless the evaluation budget runs out
//! first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::problems::{evaluate, BenchmarkFunction, EvalCounter};
use crate::regression::{build_regression_vector, RegressorId, RegressorKind};
use crate::rng::RngStream;
use crate::strategies::{
    apply_strategy, create_test_set, create_validation_vector, StrategyId, VALIDATION_ORDINAL,
};
use crate::types::{init_population, DeParams, Individual, Population, RealVector};

/// Which trial-construction rule a run uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    /// Rand/1/Bin trials, the classic loop.
    Classic,
    /// Ensemble test set blended by the given regressor.
    Regression(RegressorKind),
}

impl Algorithm {
    /// The six algorithms of the benchmark comparison, in report order.
    pub fn full_set() -> [Algorithm; 6] {
        [
            Algorithm::Classic,
            Algorithm::Regression(RegressorKind::defaults(RegressorId::RandomForest)),
            Algorithm::Regression(RegressorKind::defaults(RegressorId::ExtraTrees)),
            Algorithm::Regression(RegressorKind::defaults(RegressorId::GradientBoosting)),
            Algorithm::Regression(RegressorKind::defaults(RegressorId::DecisionTree)),
            Algorithm::Regression(RegressorKind::defaults(RegressorId::RidgeLinear)),
        ]
    }

    pub fn token(&self) -> String {
        match self {
            Algorithm::Classic => "de".to_string(),
            Algorithm::Regression(kind) => format!("de+{}", kind.id.token()),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "de" {
            return Ok(Algorithm::Classic);
        }
        if let Some(reg) = s.strip_prefix("de+") {
            if let Ok(id) = reg.parse::<RegressorId>() {
                return Ok(Algorithm::Regression(RegressorKind::defaults(id)));
            }
        }
        Err(Error::invalid(
            "algorithm",
            format!("unknown algorithm token `{s}`"),
        ))
    }
}

/// Everything one run needs; two runs with equal configs produce bitwise
/// identical results.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: DeParams,
    pub function: BenchmarkFunction,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Total objective-evaluation budget, initialization included.
    pub budget: u64,
}

impl RunConfig {
    /// A run at the benchmark defaults for the given algorithm, function
    /// and seed: NP = 10, F = 0.5, CR = 0.9, 1000 generations, D = 10,
    /// budget 10,000.
    pub fn paper_defaults(algorithm: Algorithm, function: BenchmarkFunction, seed: u64) -> Self {
        let params = DeParams {
            dimension_d: function.dimension,
            ..DeParams::default()
        };
        let budget = params.population_np as u64 * params.max_generations as u64;
        RunConfig {
            params,
            function,
            algorithm,
            seed,
            budget,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let Algorithm::Regression(kind) = &self.algorithm {
            kind.validate()?;
        }
        if self.params.dimension_d != self.function.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.function.dimension,
                actual: self.params.dimension_d,
            });
        }
        if self.budget < self.params.population_np as u64 {
            return Err(Error::invalid(
                "budget",
                format!(
                    "{} cannot cover the initial population of {}",
                    self.budget, self.params.population_np
                ),
            ));
        }
        Ok(())
    }
}

/// Outcome of a single run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub best_fitness: f64,
    pub best_position: RealVector,
    pub evaluations_used: u64,
    /// Best fitness after initialization and after each completed
    /// generation; non-increasing.
    pub per_generation_best: Vec<f64>,
    /// How many regression fits were skipped for degenerate input or a
    /// singular solve (the validation vector was used instead).
    pub regression_fallbacks: u64,
}

/// Greedy one-to-one selection; ties admit the trial.
pub fn select(candidate: &Individual, trial: Individual) -> Result<Individual> {
    let candidate_fitness = candidate.fitness()?;
    let trial_fitness = trial.fitness()?;
    if trial_fitness <= candidate_fitness {
        Ok(trial)
    } else {
        Ok(candidate.clone())
    }
}

struct LoopState {
    population: Population,
    counter: EvalCounter,
    history: Vec<f64>,
}

fn initialize(config: &RunConfig, rng: &mut RngStream) -> Result<LoopState> {
    config.validate()?;
    let mut counter = EvalCounter::new(config.budget)?;
    let bounds = config.function.bounds;
    let mut population = init_population(&config.params, bounds, rng)?;
    for member in &mut population.members {
        let fitness = evaluate(&config.function, &member.position, &mut counter)?;
        member.fitness = Some(fitness);
    }
    let best = population.members[population.best_index()?].fitness()?;
    Ok(LoopState {
        population,
        counter,
        history: vec![best],
    })
}

fn finish(state: LoopState, fallbacks: u64) -> Result<RunResult> {
    let best_index = state.population.best_index()?;
    let best = &state.population.members[best_index];
    Ok(RunResult {
        best_fitness: best.fitness()?,
        best_position: best.position.clone(),
        evaluations_used: state.counter.used(),
        per_generation_best: state.history,
        regression_fallbacks: fallbacks,
    })
}

/// Runs classic DE: Rand/1/Bin trials under greedy selection.
pub fn run_classic_de(config: &RunConfig, rng: &mut RngStream) -> Result<RunResult> {
    let strategy = StrategyId::from_ordinal(VALIDATION_ORDINAL)?;
    let bounds = config.function.bounds;
    let mut state = initialize(config, rng)?;
    let np = config.params.population_np;

    for _ in 1..config.params.max_generations {
        if state.counter.remaining() == 0 {
            break;
        }
        let best_position =
            state.population.members[state.population.best_index()?].position.clone();
        let mut next = Vec::with_capacity(np);
        for i in 0..np {
            if state.counter.remaining() == 0 {
                next.push(state.population.members[i].clone());
                continue;
            }
            let position = apply_strategy(
                strategy,
                &state.population,
                &best_position,
                i,
                &config.params,
                bounds,
                rng,
            )?;
            let fitness = evaluate(&config.function, &position, &mut state.counter)?;
            let trial = Individual {
                position,
                fitness: Some(fitness),
            };
            next.push(select(&state.population.members[i], trial)?);
        }
        state.population.members = next;
        state.population.generation += 1;
        let best = state.population.members[state.population.best_index()?].fitness()?;
        state.history.push(best);
    }
    finish(state, 0)
}

/// Runs the regression-ensemble loop.
///
/// Per member and generation, the random draws happen in a fixed order:
/// the training test set, the validation vector, the query test set, then
/// any randomness the regressor itself consumes. All come from the single
/// run stream, so a seed pins the whole trajectory.
pub fn run_regression_de(
    config: &RunConfig,
    kind: &RegressorKind,
    rng: &mut RngStream,
) -> Result<RunResult> {
    let bounds = config.function.bounds;
    let mut state = initialize(config, rng)?;
    let np = config.params.population_np;
    let mut fallbacks = 0u64;

    for _ in 1..config.params.max_generations {
        if state.counter.remaining() == 0 {
            break;
        }
        let best_position =
            state.population.members[state.population.best_index()?].position.clone();
        let mut next = Vec::with_capacity(np);
        for i in 0..np {
            if state.counter.remaining() == 0 {
                next.push(state.population.members[i].clone());
                continue;
            }
            let train = create_test_set(
                &state.population,
                &best_position,
                i,
                &config.params,
                bounds,
                rng,
            )?;
            let validation = create_validation_vector(
                &state.population,
                &best_position,
                i,
                &config.params,
                bounds,
                rng,
            )?;
            let query = create_test_set(
                &state.population,
                &best_position,
                i,
                &config.params,
                bounds,
                rng,
            )?;
            let regression =
                build_regression_vector(&train, &query, &validation, kind, bounds, rng)?;
            if regression.fell_back {
                fallbacks += 1;
            }
            let fitness = evaluate(&config.function, &regression.vector, &mut state.counter)?;
            let trial = Individual {
                position: regression.vector,
                fitness: Some(fitness),
            };
            next.push(select(&state.population.members[i], trial)?);
        }
        state.population.members = next;
        state.population.generation += 1;
        let best = state.population.members[state.population.best_index()?].fitness()?;
        state.history.push(best);
    }
    finish(state, fallbacks)
}

/// Dispatches on the configured algorithm with a stream seeded from the
/// config.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    let mut rng = RngStream::new(config.seed);
    match &config.algorithm {
        Algorithm::Classic => run_classic_de(config, &mut rng),
        Algorithm::Regression(kind) => run_regression_de(config, kind, &mut rng),
    }
}

/// Runs every config, in parallel when the `parallel` feature is enabled.
/// Results come back in config order either way.
pub fn run_batch(configs: &[RunConfig]) -> Result<Vec<RunResult>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        configs.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(configs)
    }
}

/// Runs every config on the calling thread; output is identical to
/// `run_batch`.
pub fn run_batch_sequential(configs: &[RunConfig]) -> Result<Vec<RunResult>> {
    configs.iter().map(run).collect()
}
