//! Tree ensembles: bagged forests (best splits on bootstrap resamples) and
//! extra-trees (random splits on the full sample). Both predict the mean of
//! their member trees.

use crate::error::Result;
use crate::rng::RngStream;

use super::tree::{fit_cart_on, CartConfig, CartTree, SplitRule};
use super::RegressionDataset;

/// An averaged ensemble of regression trees.
#[derive(Clone, Debug)]
pub struct Forest {
    trees: Vec<CartTree>,
}

/// Fits `n_estimators` best-split trees, each on a bootstrap resample of
/// the data (as many draws as rows, with replacement).
///
/// Per tree, the stream is consumed in this order: the bootstrap indices,
/// then nothing further (best splits draw nothing).
pub fn fit_random_forest(
    data: &RegressionDataset,
    n_estimators: usize,
    config: &CartConfig,
    rng: &mut RngStream,
) -> Result<Forest> {
    debug_assert_eq!(config.split_rule, SplitRule::Best);
    let n = data.rows();
    let mut trees = Vec::with_capacity(n_estimators);
    let mut bootstrap = vec![0usize; n];
    for _ in 0..n_estimators {
        for slot in bootstrap.iter_mut() {
            *slot = rng.index(n);
        }
        trees.push(fit_cart_on(data, &bootstrap, config, rng)?);
    }
    Ok(Forest { trees })
}

/// Fits `n_estimators` random-split trees, every one on the full sample
/// (no bagging). Randomness enters only through each node's feature and
/// threshold draw.
pub fn fit_extra_trees(
    data: &RegressionDataset,
    n_estimators: usize,
    config: &CartConfig,
    rng: &mut RngStream,
) -> Result<Forest> {
    debug_assert_eq!(config.split_rule, SplitRule::Extreme);
    let samples: Vec<usize> = (0..data.rows()).collect();
    let trees = (0..n_estimators)
        .map(|_| fit_cart_on(data, &samples, config, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(Forest { trees })
}

impl Forest {
    /// Arithmetic mean of the member trees' predictions.
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for tree in &self.trees {
            sum += tree.predict(row)?;
        }
        Ok(sum / self.trees.len() as f64)
    }

    /// Each member tree's prediction, in fitting order.
    pub fn tree_predictions(&self, row: &[f64]) -> Result<Vec<f64>> {
        self.trees.iter().map(|t| t.predict(row)).collect()
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }
}
