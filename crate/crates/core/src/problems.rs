//! The five benchmark objectives with their standard box ranges, plus the
//! evaluation counter that enforces a run's fitness budget.
//!
//! All five functions have a global minimum of exactly zero. Ackley is
//! implemented in its pairwise form, which is zero at the origin; its f64
//! residue near the optimum is on the order of 4.44e-16 per adjacent pair.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::types::Bounds;

/// Identifies one of the five benchmark objectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionId {
    Rosenbrock,
    Rastrigin,
    Sphere,
    Griewangk,
    Ackley,
}

impl FunctionId {
    /// Suite order: Rosenbrock, Rastrigin, Sphere, Griewangk, Ackley.
    pub const ALL: [FunctionId; 5] = [
        FunctionId::Rosenbrock,
        FunctionId::Rastrigin,
        FunctionId::Sphere,
        FunctionId::Griewangk,
        FunctionId::Ackley,
    ];

    /// Stable CLI/CSV token.
    pub fn token(self) -> &'static str {
        match self {
            FunctionId::Rosenbrock => "rosenbrock",
            FunctionId::Rastrigin => "rastrigin",
            FunctionId::Sphere => "sphere",
            FunctionId::Griewangk => "griewangk",
            FunctionId::Ackley => "ackley",
        }
    }

    /// The standard range for this function, applied to every dimension.
    pub fn bounds(self) -> Bounds {
        let (lo, hi) = match self {
            FunctionId::Rosenbrock | FunctionId::Rastrigin => (-15.0, 15.0),
            FunctionId::Sphere => (-100.0, 100.0),
            FunctionId::Griewangk => (-600.0, 600.0),
            FunctionId::Ackley => (-32.0, 32.0),
        };
        Bounds {
            lower: lo,
            upper: hi,
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.token() == s)
            .ok_or_else(|| {
                Error::invalid("function", format!("unknown function token `{s}`"))
            })
    }
}

/// One objective bound to a concrete dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkFunction {
    pub id: FunctionId,
    pub dimension: usize,
    pub bounds: Bounds,
}

impl BenchmarkFunction {
    /// Rejects `dimension < 2`: Rosenbrock and Ackley sum over adjacent
    /// component pairs.
    pub fn new(id: FunctionId, dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::invalid(
                "dim",
                format!("dimension {dimension} is below the minimum of 2"),
            ));
        }
        Ok(BenchmarkFunction {
            id,
            dimension,
            bounds: id.bounds(),
        })
    }

    /// Evaluates the objective without touching any budget. Callers inside
    /// an optimization run must go through [`evaluate`] instead.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self.id {
            FunctionId::Rosenbrock => rosenbrock(x),
            FunctionId::Rastrigin => rastrigin(x),
            FunctionId::Sphere => sphere(x),
            FunctionId::Griewangk => griewangk(x),
            FunctionId::Ackley => ackley(x),
        }
    }
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            100.0 * (b - a * a).powi(2) + (a - 1.0).powi(2)
        })
        .sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64
        + x.iter()
            .map(|&xi| xi * xi - 10.0 * (2.0 * PI * xi).cos())
            .sum::<f64>()
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|&xi| xi * xi).sum()
}

fn griewangk(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|&xi| xi * xi).sum::<f64>() / 4000.0;
    let product: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| (xi / ((i + 1) as f64).sqrt()).cos())
        .product();
    sum - product + 1.0
}

fn ackley(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            20.0 + E
                - 20.0 * (-0.2 * (0.5 * (a * a + b * b)).sqrt()).exp()
                - (0.5 * ((2.0 * PI * a).cos() + (2.0 * PI * b).cos())).exp()
        })
        .sum()
}

/// Tracks objective evaluations against a hard budget. Every fitness call in
/// a run flows through one counter, so classic and regression loops are
/// charged identically.
#[derive(Clone, Debug)]
pub struct EvalCounter {
    used: u64,
    budget: u64,
}

impl EvalCounter {
    pub fn new(budget: u64) -> Result<Self> {
        if budget == 0 {
            return Err(Error::invalid("budget", "budget must be positive"));
        }
        Ok(EvalCounter { used: 0, budget })
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.used
    }

    fn charge(&mut self) -> Result<()> {
        if self.used >= self.budget {
            return Err(Error::BudgetExhausted {
                budget: self.budget,
            });
        }
        self.used += 1;
        Ok(())
    }
}

/// Evaluates `f` at `x`, charging one unit of budget. Fails if the budget is
/// already spent or the vector has the wrong length.
pub fn evaluate(f: &BenchmarkFunction, x: &[f64], counter: &mut EvalCounter) -> Result<f64> {
    if x.len() != f.dimension {
        return Err(Error::DimensionMismatch {
            expected: f.dimension,
            actual: x.len(),
        });
    }
    counter.charge()?;
    Ok(f.value(x))
}

/// The five functions in suite order at the given dimension.
pub fn make_suite(dimension: usize) -> Result<Vec<BenchmarkFunction>> {
    FunctionId::ALL
        .into_iter()
        .map(|id| BenchmarkFunction::new(id, dimension))
        .collect()
}
