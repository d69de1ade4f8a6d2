//! Stage-wise gradient boosting for squared loss: an initial constant
//! (the target mean) plus shrunken depth-limited trees, each fitted to the
//! current residuals.

use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::tree::{fit_cart, CartConfig, CartTree, SplitRule};
use super::RegressionDataset;

/// A fitted boosting model: `predict(x) = init + lr * sum(tree_m(x))`.
#[derive(Clone, Debug)]
pub struct GradientBoosting {
    init: f64,
    learning_rate: f64,
    stages: Vec<CartTree>,
}

/// Controls for the boosting fit.
#[derive(Clone, Copy, Debug)]
pub struct BoostingConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: u32,
    pub min_samples_split: usize,
}

impl Default for BoostingConfig {
    fn default() -> Self {
        BoostingConfig {
            n_estimators: 100,
            learning_rate: 0.1,
            max_depth: 3,
            min_samples_split: 2,
        }
    }
}

/// Fits squared-loss gradient boosting. With zero stages the model is the
/// target mean. Splits are deterministic (best-split trees), so the stream
/// is only a signature convention here and is never drawn from.
pub fn fit_gradient_boosting(
    data: &RegressionDataset,
    config: &BoostingConfig,
    rng: &mut RngStream,
) -> Result<GradientBoosting> {
    if data.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::invalid(
            "learning_rate",
            format!("{} must be positive", config.learning_rate),
        ));
    }
    let n = data.rows();
    let init = data.targets().iter().sum::<f64>() / n as f64;

    let tree_config = CartConfig {
        split_rule: SplitRule::Best,
        min_samples_split: config.min_samples_split,
        max_depth: Some(config.max_depth),
    };

    let mut residuals: Vec<f64> = data.targets().iter().map(|&y| y - init).collect();
    let mut stages = Vec::with_capacity(config.n_estimators);
    let mut stage_data = data.with_targets(residuals.clone());

    for _ in 0..config.n_estimators {
        let tree = fit_cart(&stage_data, &tree_config, rng)?;
        for (i, r) in residuals.iter_mut().enumerate() {
            *r -= config.learning_rate * tree.predict(data.row(i))?;
        }
        stage_data.set_targets(&residuals);
        stages.push(tree);
    }

    Ok(GradientBoosting {
        init,
        learning_rate: config.learning_rate,
        stages,
    })
}

impl GradientBoosting {
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        let mut out = self.init;
        for tree in &self.stages {
            out += self.learning_rate * tree.predict(row)?;
        }
        Ok(out)
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Training predictions after each prefix of stages: index 0 is the
    /// bare initial constant, index m uses the first m trees.
    pub fn staged_training_mse(&self, data: &RegressionDataset) -> Result<Vec<f64>> {
        let n = data.rows();
        let mut current: Vec<f64> = vec![self.init; n];
        let mse = |preds: &[f64]| {
            preds
                .iter()
                .zip(data.targets())
                .map(|(p, y)| (p - y) * (p - y))
                .sum::<f64>()
                / n as f64
        };
        let mut out = Vec::with_capacity(self.stages.len() + 1);
        out.push(mse(&current));
        for tree in &self.stages {
            for (i, c) in current.iter_mut().enumerate() {
                *c += self.learning_rate * tree.predict(data.row(i))?;
            }
            out.push(mse(&current));
        }
        Ok(out)
    }
}
