//! The ten-strategy ensemble: five mutation rules, each paired with
//! exponential crossover (ordinals 1-5) and binomial crossover (ordinals
//! 6-10), plus construction of the per-individual test set and validation
//! vector.
//!
//! Ordinal order is fixed and stable in logs and CSV output:
//!
//! | ordinal | strategy        | ordinal | strategy        |
//! |---------|-----------------|---------|-----------------|
//! | 1       | Best/1/Exp      | 6       | Best/1/Bin      |
//! | 2       | Rand/1/Exp      | 7      | Rand/1/Bin      |
//! | 3       | RandToBest/1/Exp| 8       | RandToBest/1/Bin|
//! | 4       | Best/2/Exp      | 9       | Best/2/Bin      |
//! | 5       | Rand/2/Exp      | 10      | Rand/2/Bin      |

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{
    clamp_to_bounds, sample_distinct_into, Bounds, DeParams, Population, RealVector,
};

/// Base-vector and difference-pair rule of a strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    Best1,
    Rand1,
    RandToBest1,
    Best2,
    Rand2,
}

impl Mutation {
    /// Number of donor indices the rule draws (all distinct, none equal to
    /// the target).
    pub fn donor_count(self) -> usize {
        match self {
            Mutation::Best1 => 2,
            Mutation::Rand1 => 3,
            Mutation::RandToBest1 => 2,
            Mutation::Best2 => 4,
            Mutation::Rand2 => 5,
        }
    }
}

/// Which crossover the strategy applies to its mutant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossoverKind {
    Exponential,
    Binomial,
}

/// One row of the strategy ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyId {
    pub mutation: Mutation,
    pub crossover: CrossoverKind,
    /// Position in the ensemble, 1-10.
    pub ordinal: u8,
}

const MUTATION_ORDER: [Mutation; 5] = [
    Mutation::Best1,
    Mutation::Rand1,
    Mutation::RandToBest1,
    Mutation::Best2,
    Mutation::Rand2,
];

/// The full ensemble in ordinal order.
pub const ENSEMBLE_SIZE: usize = 10;

pub fn ensemble() -> [StrategyId; ENSEMBLE_SIZE] {
    let mut out = [StrategyId {
        mutation: Mutation::Best1,
        crossover: CrossoverKind::Exponential,
        ordinal: 1,
    }; ENSEMBLE_SIZE];
    let mut ordinal = 1u8;
    for (slot, crossover) in [
        (0, CrossoverKind::Exponential),
        (5, CrossoverKind::Binomial),
    ] {
        for (offset, mutation) in MUTATION_ORDER.into_iter().enumerate() {
            out[slot + offset] = StrategyId {
                mutation,
                crossover,
                ordinal,
            };
            ordinal += 1;
        }
    }
    out
}

impl StrategyId {
    /// Looks up a strategy by its 1-based ordinal.
    pub fn from_ordinal(ordinal: u8) -> Result<Self> {
        if !(1..=ENSEMBLE_SIZE as u8).contains(&ordinal) {
            return Err(Error::invalid(
                "strategy",
                format!("ordinal {ordinal} outside 1..=10"),
            ));
        }
        Ok(ensemble()[(ordinal - 1) as usize])
    }
}

/// The classic DE strategy, Rand/1/Bin (ordinal 7). Also builds the
/// validation vector.
pub const VALIDATION_ORDINAL: u8 = 7;

/// Evaluates a mutation rule for explicitly supplied donors, component-wise:
///
/// * Best/1: `best + F (d0 - d1)`
/// * Rand/1: `d0 + F (d1 - d2)`
/// * RandToBest/1: `x + F (best - x) + F (d0 - d1)`
/// * Best/2: `best + F (d0 + d1 - d2 - d3)`
/// * Rand/2: `d0 + F (d1 + d2 - d3 - d4)`
///
/// `donors[k]` is the population member selected by the rule's k-th random
/// index. Exposed separately from [`mutate`] so the formulas can be checked
/// against fixed donor choices.
pub fn mutant_from_parts(
    mutation: Mutation,
    target: &[f64],
    best: &[f64],
    donors: &[&[f64]],
    f: f64,
) -> RealVector {
    debug_assert_eq!(donors.len(), mutation.donor_count());
    let d = target.len();
    let mut out = vec![0.0; d];
    for j in 0..d {
        out[j] = match mutation {
            Mutation::Best1 => best[j] + f * (donors[0][j] - donors[1][j]),
            Mutation::Rand1 => donors[0][j] + f * (donors[1][j] - donors[2][j]),
            Mutation::RandToBest1 => {
                target[j]
                    + f * (best[j] - target[j])
                    + f * (donors[0][j] - donors[1][j])
            }
            Mutation::Best2 => {
                best[j] + f * (donors[0][j] + donors[1][j] - donors[2][j] - donors[3][j])
            }
            Mutation::Rand2 => {
                donors[0][j]
                    + f * (donors[1][j] + donors[2][j] - donors[3][j] - donors[4][j])
            }
        };
    }
    out
}

/// Draws fresh donor indices and applies the mutation rule. `best` is the
/// generation-start best position; the caller keeps it fixed while building
/// trials for the whole generation.
pub fn mutate(
    mutation: Mutation,
    population: &Population,
    best: &[f64],
    target_index: usize,
    f: f64,
    rng: &mut RngStream,
) -> Result<RealVector> {
    let mut indices = [0usize; 5];
    let count = mutation.donor_count();
    sample_distinct_into(
        &mut indices[..count],
        target_index,
        population.np(),
        rng,
    )?;
    let mut donors: [&[f64]; 5] = [&[]; 5];
    for (slot, &idx) in donors.iter_mut().zip(&indices[..count]) {
        *slot = &population.members[idx].position;
    }
    Ok(mutant_from_parts(
        mutation,
        &population.members[target_index].position,
        best,
        &donors[..count],
        f,
    ))
}

/// Binomial (uniform) crossover: component `j` comes from the mutant when
/// `rand_j <= CR` or `j == j_rand`, otherwise from the target. The forced
/// `j_rand` gene guarantees at least one mutant component.
///
/// Draw order: `j_rand` first, then one uniform draw per component
/// (including `j_rand`'s position, so the stream length is independent of
/// the outcome).
pub fn binomial_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut RngStream,
) -> Result<RealVector> {
    if target.len() != mutant.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            actual: mutant.len(),
        });
    }
    let d = target.len();
    let j_rand = rng.index(d);
    let mut out = vec![0.0; d];
    for j in 0..d {
        let take_mutant = rng.next_f64() <= cr || j == j_rand;
        out[j] = if take_mutant { mutant[j] } else { target[j] };
    }
    Ok(out)
}

/// Exponential crossover: a circular block of mutant components starting at
/// a uniform position, extended while `rand <= CR`, length in `[1, D]`.
pub fn exponential_crossover(
    target: &[f64],
    mutant: &[f64],
    cr: f64,
    rng: &mut RngStream,
) -> Result<RealVector> {
    if target.len() != mutant.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            actual: mutant.len(),
        });
    }
    let d = target.len();
    let mut out = target.to_vec();
    let start = rng.index(d);
    let mut len = 1;
    out[start] = mutant[start];
    while len < d && rng.next_f64() <= cr {
        let j = (start + len) % d;
        out[j] = mutant[j];
        len += 1;
    }
    Ok(out)
}

/// Mutation, then the strategy's crossover, then clamping. The returned
/// trial is never fitness-evaluated here.
pub fn apply_strategy(
    strategy: StrategyId,
    population: &Population,
    best: &[f64],
    target_index: usize,
    params: &DeParams,
    bounds: Bounds,
    rng: &mut RngStream,
) -> Result<RealVector> {
    let mutant = mutate(
        strategy.mutation,
        population,
        best,
        target_index,
        params.amplification_f,
        rng,
    )?;
    let target = &population.members[target_index].position;
    let mut trial = match strategy.crossover {
        CrossoverKind::Exponential => {
            exponential_crossover(target, &mutant, params.crossover_cr, rng)?
        }
        CrossoverKind::Binomial => {
            binomial_crossover(target, &mutant, params.crossover_cr, rng)?
        }
    };
    clamp_to_bounds(&mut trial, bounds);
    Ok(trial)
}

/// Applies all ten strategies to one target in ordinal order, each with
/// fresh donor and crossover draws. The result is the individual's test
/// set: ten unevaluated trial vectors.
pub fn create_test_set(
    population: &Population,
    best: &[f64],
    target_index: usize,
    params: &DeParams,
    bounds: Bounds,
    rng: &mut RngStream,
) -> Result<Vec<RealVector>> {
    ensemble()
        .into_iter()
        .map(|s| apply_strategy(s, population, best, target_index, params, bounds, rng))
        .collect()
}

/// One Rand/1/Bin trial (ordinal 7): the validation vector that serves as
/// the regression target, and the classic loop's only trial.
pub fn create_validation_vector(
    population: &Population,
    best: &[f64],
    target_index: usize,
    params: &DeParams,
    bounds: Bounds,
    rng: &mut RngStream,
) -> Result<RealVector> {
    apply_strategy(
        StrategyId::from_ordinal(VALIDATION_ORDINAL)?,
        population,
        best,
        target_index,
        params,
        bounds,
        rng,
    )
}
