//! Value types shared by the optimizer: vectors, individuals, populations,
//! run parameters, and box bounds.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A candidate solution's coordinates. Length equals the problem dimension
/// and every component is finite.
pub type RealVector = Vec<f64>;

/// A candidate solution together with its cached objective value.
/// `fitness` is `None` until the vector has been evaluated.
#[derive(Clone, Debug)]
pub struct Individual {
    pub position: RealVector,
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn unevaluated(position: RealVector) -> Self {
        Individual {
            position,
            fitness: None,
        }
    }

    /// The cached fitness, or [`Error::Unevaluated`] if missing.
    pub fn fitness(&self) -> Result<f64> {
        self.fitness.ok_or(Error::Unevaluated)
    }
}

/// The population at one generation boundary.
#[derive(Clone, Debug)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: u32,
}

impl Population {
    pub fn np(&self) -> usize {
        self.members.len()
    }

    /// Index of the lowest-fitness member. Requires an evaluated population.
    pub fn best_index(&self) -> Result<usize> {
        if self.members.is_empty() {
            return Err(Error::TooFewValues {
                context: "population",
                needed: 1,
                actual: 0,
            });
        }
        let mut best = 0;
        let mut best_fit = f64::INFINITY;
        for (i, m) in self.members.iter().enumerate() {
            let f = m.fitness()?;
            if f < best_fit {
                best_fit = f;
                best = i;
            }
        }
        Ok(best)
    }
}

/// Control parameters of the differential evolution loop.
///
/// `amplification_f` scales difference vectors and must lie in `[0.1, 1.0]`;
/// `crossover_cr` lies in `[0.0, 1.0]`. The population needs at least six
/// members because the Rand/2 strategy draws five donors distinct from the
/// target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeParams {
    pub amplification_f: f64,
    pub crossover_cr: f64,
    pub population_np: usize,
    pub dimension_d: usize,
    pub max_generations: u32,
}

impl Default for DeParams {
    /// The benchmark defaults: F = 0.5, CR = 0.9, NP = 10, D = 10,
    /// 1000 generations.
    fn default() -> Self {
        DeParams {
            amplification_f: 0.5,
            crossover_cr: 0.9,
            population_np: 10,
            dimension_d: 10,
            max_generations: 1000,
        }
    }
}

impl DeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplification_f.is_finite()
            && (0.1..=1.0).contains(&self.amplification_f))
        {
            return Err(Error::invalid(
                "f",
                format!("{} is outside [0.1, 1.0]", self.amplification_f),
            ));
        }
        if !(self.crossover_cr.is_finite() && (0.0..=1.0).contains(&self.crossover_cr)) {
            return Err(Error::invalid(
                "cr",
                format!("{} is outside [0.0, 1.0]", self.crossover_cr),
            ));
        }
        if self.population_np < 6 {
            return Err(Error::invalid(
                "np",
                format!(
                    "{} is too small; five distinct donors plus the target need np >= 6",
                    self.population_np
                ),
            ));
        }
        if self.dimension_d == 0 {
            return Err(Error::invalid("dim", "dimension must be positive"));
        }
        if self.max_generations == 0 {
            return Err(Error::invalid("tmax", "generation limit must be positive"));
        }
        Ok(())
    }
}

/// Symmetric box bounds applied to every dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::NonFinite { context: "bounds" });
        }
        if lower >= upper {
            return Err(Error::invalid(
                "bounds",
                format!("lower {lower} must be below upper {upper}"),
            ));
        }
        Ok(Bounds { lower, upper })
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lower..=self.upper).contains(&x)
    }
}

/// Clamps every component into `[bounds.lower, bounds.upper]` in place.
/// Idempotent; in-range components are untouched.
pub fn clamp_to_bounds(v: &mut [f64], bounds: Bounds) {
    for x in v.iter_mut() {
        *x = x.clamp(bounds.lower, bounds.upper);
    }
}

/// Draws `NP` individuals uniformly inside the bounds, all unevaluated,
/// at generation zero.
pub fn init_population(
    params: &DeParams,
    bounds: Bounds,
    rng: &mut RngStream,
) -> Result<Population> {
    params.validate()?;
    let members = (0..params.population_np)
        .map(|_| {
            let position = (0..params.dimension_d)
                .map(|_| rng.uniform(bounds.lower, bounds.upper))
                .collect();
            Individual::unevaluated(position)
        })
        .collect();
    Ok(Population {
        members,
        generation: 0,
    })
}

/// Fills `out` with pairwise-distinct indices drawn from `[0, np)`, none
/// equal to `exclude`. Needs `out.len() + 1 <= np`.
pub fn sample_distinct_into(
    out: &mut [usize],
    exclude: usize,
    np: usize,
    rng: &mut RngStream,
) -> Result<()> {
    if out.len() + 1 > np {
        return Err(Error::invalid(
            "count",
            format!(
                "cannot draw {} distinct indices from {} members while excluding one",
                out.len(),
                np
            ),
        ));
    }
    let mut filled = 0;
    while filled < out.len() {
        let candidate = rng.index(np);
        if candidate == exclude || out[..filled].contains(&candidate) {
            continue;
        }
        out[filled] = candidate;
        filled += 1;
    }
    Ok(())
}

/// Allocating convenience form of [`sample_distinct_into`].
pub fn sample_distinct_indices(
    count: usize,
    exclude: usize,
    np: usize,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    let mut out = vec![0; count];
    sample_distinct_into(&mut out, exclude, np, rng)?;
    Ok(out)
}
