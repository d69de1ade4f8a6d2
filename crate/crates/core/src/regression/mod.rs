//! Five from-scratch regressors behind one fit/predict contract, plus the
//! arrangement that turns a strategy test set and validation vector into a
//! regression trial vector.
//!
//! The training arrangement: sample `j` is the j-th component of each of
//! the ten test-set vectors (one feature per strategy, in ordinal order),
//! and its target is component `j` of the validation vector. The fitted
//! model is then queried at the dimension rows of a second, independently
//! drawn test set, which blends validation components across dimensions
//! instead of echoing them back.

mod boosting;
mod forest;
mod ridge;
mod tree;

pub use boosting::{fit_gradient_boosting, BoostingConfig, GradientBoosting};
pub use forest::{fit_extra_trees, fit_random_forest, Forest};
pub use ridge::{fit_ridge, RidgeModel};
pub use tree::{fit_cart, fit_cart_on, CartConfig, CartTree, SplitRule};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::strategies::ENSEMBLE_SIZE;
use crate::types::{clamp_to_bounds, Bounds, RealVector};

/// Row-major feature matrix with one target per row.
#[derive(Clone, Debug)]
pub struct RegressionDataset {
    features: Vec<f64>,
    targets: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl RegressionDataset {
    /// Builds a dataset from explicit feature rows. All rows must share one
    /// width and every entry must be finite.
    pub fn new(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if rows.len() != targets.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                actual: targets.len(),
            });
        }
        let cols = rows[0].len();
        let mut features = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            features.extend_from_slice(row);
        }
        if !features.iter().all(|v| v.is_finite()) || !targets.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                context: "regression dataset",
            });
        }
        Ok(RegressionDataset {
            features,
            targets,
            rows: rows.len(),
            cols,
        })
    }

    /// The per-individual training arrangement: `D` rows of ten strategy
    /// outputs (row `j` holds component `j` of every test-set vector),
    /// targeted by the validation component `v[j]`.
    pub fn from_test_set(test_set: &[RealVector], validation: &[f64]) -> Result<Self> {
        if test_set.len() != ENSEMBLE_SIZE {
            return Err(Error::DimensionMismatch {
                expected: ENSEMBLE_SIZE,
                actual: test_set.len(),
            });
        }
        let d = validation.len();
        for t in test_set {
            if t.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: t.len(),
                });
            }
        }
        let mut features = Vec::with_capacity(d * ENSEMBLE_SIZE);
        for j in 0..d {
            for t in test_set {
                features.push(t[j]);
            }
        }
        if !features.iter().all(|v| v.is_finite())
            || !validation.iter().all(|v| v.is_finite())
        {
            return Err(Error::NonFinite {
                context: "regression dataset",
            });
        }
        Ok(RegressionDataset {
            features,
            targets: validation.to_vec(),
            rows: d,
            cols: ENSEMBLE_SIZE,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn feature(&self, row: usize, col: usize) -> f64 {
        self.features[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.features[row * self.cols..(row + 1) * self.cols]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    /// Same features with new targets (used by boosting residual stages).
    pub fn with_targets(&self, targets: Vec<f64>) -> Self {
        debug_assert_eq!(targets.len(), self.rows);
        RegressionDataset {
            features: self.features.clone(),
            targets,
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn set_targets(&mut self, targets: &[f64]) {
        debug_assert_eq!(targets.len(), self.rows);
        self.targets.clear();
        self.targets.extend_from_slice(targets);
    }
}

/// The five regressor identities with their stable tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegressorId {
    RandomForest,
    ExtraTrees,
    GradientBoosting,
    DecisionTree,
    RidgeLinear,
}

impl RegressorId {
    pub const ALL: [RegressorId; 5] = [
        RegressorId::RandomForest,
        RegressorId::ExtraTrees,
        RegressorId::GradientBoosting,
        RegressorId::DecisionTree,
        RegressorId::RidgeLinear,
    ];

    pub fn token(self) -> &'static str {
        match self {
            RegressorId::RandomForest => "rf",
            RegressorId::ExtraTrees => "ext",
            RegressorId::GradientBoosting => "gb",
            RegressorId::DecisionTree => "dt",
            RegressorId::RidgeLinear => "lm",
        }
    }
}

impl fmt::Display for RegressorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for RegressorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegressorId::ALL
            .into_iter()
            .find(|id| id.token() == s)
            .ok_or_else(|| Error::invalid("regressor", format!("unknown regressor token `{s}`")))
    }
}

/// A regressor identity plus every tunable the five models use. Fields that
/// a given model ignores are simply unused (for example `ridge_alpha` for
/// the forests).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegressorKind {
    pub id: RegressorId,
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: Option<u32>,
    pub min_samples_split: usize,
    pub ridge_alpha: f64,
}

impl RegressorKind {
    /// Library defaults: forests use 40 unlimited-depth trees; boosting uses
    /// 100 depth-3 stages at a 0.1 learning rate; the single tree is
    /// unlimited; ridge uses alpha = 1.
    pub fn defaults(id: RegressorId) -> Self {
        let base = RegressorKind {
            id,
            n_estimators: 40,
            learning_rate: 0.1,
            max_depth: None,
            min_samples_split: 2,
            ridge_alpha: 1.0,
        };
        match id {
            RegressorId::RandomForest | RegressorId::ExtraTrees => base,
            RegressorId::GradientBoosting => RegressorKind {
                n_estimators: 100,
                max_depth: Some(3),
                ..base
            },
            RegressorId::DecisionTree | RegressorId::RidgeLinear => RegressorKind {
                n_estimators: 1,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.id {
            RegressorId::RandomForest | RegressorId::ExtraTrees => {
                if self.n_estimators == 0 {
                    return Err(Error::invalid(
                        "estimators",
                        "forests need at least one tree",
                    ));
                }
            }
            RegressorId::GradientBoosting => {
                if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
                    return Err(Error::invalid(
                        "learning_rate",
                        format!("{} must be positive", self.learning_rate),
                    ));
                }
            }
            RegressorId::DecisionTree => {}
            RegressorId::RidgeLinear => {
                if !(self.ridge_alpha.is_finite() && self.ridge_alpha >= 0.0) {
                    return Err(Error::invalid(
                        "ridge_alpha",
                        format!("{} must be nonnegative", self.ridge_alpha),
                    ));
                }
            }
        }
        if self.min_samples_split < 2 {
            return Err(Error::invalid(
                "min_samples_split",
                "must be at least 2",
            ));
        }
        Ok(())
    }
}

/// Any of the five fitted models; prediction is deterministic once fitted.
#[derive(Clone, Debug)]
pub enum FittedRegressor {
    Tree(CartTree),
    Forest(Forest),
    Boosting(GradientBoosting),
    Ridge(RidgeModel),
}

impl FittedRegressor {
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        match self {
            FittedRegressor::Tree(t) => t.predict(row),
            FittedRegressor::Forest(f) => f.predict(row),
            FittedRegressor::Boosting(b) => b.predict(row),
            FittedRegressor::Ridge(r) => r.predict(row),
        }
    }
}

/// Fits the model selected by `kind` on `data`.
pub fn fit_regressor(
    kind: &RegressorKind,
    data: &RegressionDataset,
    rng: &mut RngStream,
) -> Result<FittedRegressor> {
    kind.validate()?;
    let tree_config = CartConfig {
        split_rule: SplitRule::Best,
        min_samples_split: kind.min_samples_split,
        max_depth: kind.max_depth,
    };
    match kind.id {
        RegressorId::RandomForest => Ok(FittedRegressor::Forest(fit_random_forest(
            data,
            kind.n_estimators,
            &tree_config,
            rng,
        )?)),
        RegressorId::ExtraTrees => {
            let config = CartConfig {
                split_rule: SplitRule::Extreme,
                ..tree_config
            };
            Ok(FittedRegressor::Forest(fit_extra_trees(
                data,
                kind.n_estimators,
                &config,
                rng,
            )?))
        }
        RegressorId::GradientBoosting => {
            let config = BoostingConfig {
                n_estimators: kind.n_estimators,
                learning_rate: kind.learning_rate,
                max_depth: kind.max_depth.unwrap_or(3),
                min_samples_split: kind.min_samples_split,
            };
            Ok(FittedRegressor::Boosting(fit_gradient_boosting(
                data, &config, rng,
            )?))
        }
        RegressorId::DecisionTree => {
            Ok(FittedRegressor::Tree(fit_cart(data, &tree_config, rng)?))
        }
        RegressorId::RidgeLinear => Ok(FittedRegressor::Ridge(fit_ridge(data, kind.ridge_alpha)?)),
    }
}

/// A regression trial vector, flagged when the fit was skipped and the
/// validation vector returned unchanged.
#[derive(Clone, Debug)]
pub struct RegressionVector {
    pub vector: RealVector,
    /// True when the fit was skipped (sign-uniform validation targets for
    /// a tree-based kind, or a singular linear solve); the vector is then
    /// the validation vector itself.
    pub fell_back: bool,
}

/// Builds the regression trial for one individual.
///
/// Training rows come from `train` (the individual's test set) targeted by
/// `validation`; the prediction for dimension `j` is taken at row `j` of
/// `query`, a second test set drawn independently by the caller. The result
/// is clamped and never fitness-evaluated here.
pub fn build_regression_vector(
    train: &[RealVector],
    query: &[RealVector],
    validation: &[f64],
    kind: &RegressorKind,
    bounds: Bounds,
    rng: &mut RngStream,
) -> Result<RegressionVector> {
    let data = RegressionDataset::from_test_set(train, validation)?;
    if query.len() != train.len() {
        return Err(Error::DimensionMismatch {
            expected: train.len(),
            actual: query.len(),
        });
    }
    let d = validation.len();

    let fallback = |validation: &[f64]| {
        let mut vector = validation.to_vec();
        clamp_to_bounds(&mut vector, bounds);
        RegressionVector {
            vector,
            fell_back: true,
        }
    };

    // Tree predictions are convex mixtures of the targets, so when every
    // validation component sits on one side of zero the fit can only
    // reproduce that side, and its across-dimension averaging erodes the
    // per-dimension diversity selection needs. Left unchecked that is an
    // absorbing state: the population collapses onto a multiple of
    // (1,...,1) — near zero on a symmetric objective, or onto a one-sided
    // local-minimum ring — and no later tree output can leave the band.
    // The validation vector passes through instead; its mutation
    // arithmetic escapes the target hull freely, and the moment one
    // crossed component appears the targets straddle zero again and
    // fitting resumes. The guard is unconditional because a benign
    // one-orthant basin and a one-sided trap are indistinguishable from
    // the targets alone. Ridge is affine rather than hull-bound, so it
    // always fits.
    if kind.id != RegressorId::RidgeLinear {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &t in validation {
            lo = lo.min(t);
            hi = hi.max(t);
        }
        if lo >= 0.0 || hi <= 0.0 {
            return Ok(fallback(validation));
        }
    }

    let model = match fit_regressor(kind, &data, rng) {
        Ok(m) => m,
        Err(Error::SingularSystem) => return Ok(fallback(validation)),
        Err(e) => return Err(e),
    };

    let mut vector = Vec::with_capacity(d);
    let mut row = vec![0.0; ENSEMBLE_SIZE];
    for j in 0..d {
        for (slot, q) in row.iter_mut().zip(query) {
            *slot = q[j];
        }
        vector.push(model.predict(&row)?);
    }
    clamp_to_bounds(&mut vector, bounds);
    Ok(RegressionVector {
        vector,
        fell_back: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(id: RegressorId) -> RegressorKind {
        RegressorKind::defaults(id)
    }

    fn wide() -> Bounds {
        Bounds {
            lower: -1e9,
            upper: 1e9,
        }
    }

    #[test]
    fn dataset_from_test_set_layout() {
        let test_set: Vec<RealVector> = (0..10)
            .map(|s| (0..4).map(|j| (s * 10 + j) as f64).collect())
            .collect();
        let validation: Vec<f64> = vec![0.5, 1.5, 2.5, 3.5];
        let data = RegressionDataset::from_test_set(&test_set, &validation).unwrap();
        assert_eq!(data.rows(), 4);
        assert_eq!(data.cols(), 10);
        // Row j collects component j of every strategy output.
        assert_eq!(data.feature(2, 0), 2.0);
        assert_eq!(data.feature(2, 7), 72.0);
        assert_eq!(data.targets(), &validation[..]);
    }

    #[test]
    fn dataset_rejects_ragged_and_nonfinite() {
        assert!(RegressionDataset::new(vec![vec![1.0], vec![1.0, 2.0]], vec![0.0, 0.0]).is_err());
        assert!(
            RegressionDataset::new(vec![vec![f64::NAN]], vec![0.0]).is_err()
        );
        let mut test_set: Vec<RealVector> = vec![vec![0.0; 3]; 10];
        test_set[3][1] = f64::INFINITY;
        assert!(RegressionDataset::from_test_set(&test_set, &[0.0; 3]).is_err());
    }

    #[test]
    fn tokens_round_trip() {
        for id in RegressorId::ALL {
            assert_eq!(id.token().parse::<RegressorId>().unwrap(), id);
        }
        assert!("svm".parse::<RegressorId>().is_err());
    }

    #[test]
    fn defaults_match_contract() {
        let rf = kind(RegressorId::RandomForest);
        assert_eq!(rf.n_estimators, 40);
        assert_eq!(rf.max_depth, None);
        let gb = kind(RegressorId::GradientBoosting);
        assert_eq!(gb.n_estimators, 100);
        assert_eq!(gb.learning_rate, 0.1);
        assert_eq!(gb.max_depth, Some(3));
        let lm = kind(RegressorId::RidgeLinear);
        assert_eq!(lm.ridge_alpha, 1.0);
        for id in RegressorId::ALL {
            assert!(kind(id).validate().is_ok());
        }
    }

    #[test]
    fn identical_test_set_passes_validation_through() {
        // Every strategy output identical to v and constant-free rows: the
        // full-sample tree models memorize v exactly. The random forest
        // does not (bootstrap resampling drops rows), but it must stay
        // inside the hull of validation components.
        let v: RealVector = (0..6).map(|j| j as f64 * 1.1 - 2.0).collect();
        let train: Vec<RealVector> = vec![v.clone(); 10];
        let query = train.clone();
        for id in [RegressorId::DecisionTree, RegressorId::ExtraTrees] {
            let out = build_regression_vector(
                &train,
                &query,
                &v,
                &kind(id),
                wide(),
                &mut RngStream::new(5),
            )
            .unwrap();
            assert!(!out.fell_back);
            for (got, want) in out.vector.iter().zip(&v) {
                assert!((got - want).abs() < 1e-12, "{id}: {got} vs {want}");
            }
        }
        let rf = build_regression_vector(
            &train,
            &query,
            &v,
            &kind(RegressorId::RandomForest),
            wide(),
            &mut RngStream::new(5),
        )
        .unwrap();
        let (lo, hi) = (-2.0, 3.5);
        assert!(rf.vector.iter().all(|&x| (lo..=hi).contains(&x)));
    }

    #[test]
    fn one_sided_targets_near_zero_fall_back() {
        let mut rng = RngStream::new(6);
        let train: Vec<RealVector> = (0..10)
            .map(|_| (0..5).map(|_| rng.uniform(0.05, 3.0)).collect())
            .collect();
        let query = train.clone();
        let v = vec![0.1, 0.5, 2.0, 1.0, 3.0];
        for id in [
            RegressorId::RandomForest,
            RegressorId::ExtraTrees,
            RegressorId::GradientBoosting,
            RegressorId::DecisionTree,
        ] {
            let out =
                build_regression_vector(&train, &query, &v, &kind(id), wide(), &mut rng)
                    .unwrap();
            assert!(out.fell_back, "{id} should skip a sign-uniform fit");
            assert_eq!(out.vector, v);
        }

        let negated: Vec<f64> = v.iter().map(|x| -x).collect();
        let out = build_regression_vector(
            &train,
            &query,
            &negated,
            &kind(RegressorId::DecisionTree),
            wide(),
            &mut rng,
        )
        .unwrap();
        assert!(out.fell_back);

        // Ridge extrapolates past the target hull, so it keeps fitting.
        let out = build_regression_vector(
            &train,
            &query,
            &v,
            &kind(RegressorId::RidgeLinear),
            wide(),
            &mut rng,
        )
        .unwrap();
        assert!(!out.fell_back);
    }

    #[test]
    fn one_sided_targets_far_from_zero_also_fall_back() {
        // A cloud settled deep inside one orthant looks exactly like a
        // one-sided local-minimum ring; the guard cannot tell them apart
        // from the targets, so it engages for hull-bound kinds either way.
        let mut rng = RngStream::new(61);
        let train: Vec<RealVector> = (0..10)
            .map(|_| (0..5).map(|_| rng.uniform(10.0, 11.0)).collect())
            .collect();
        let query = train.clone();
        let v = vec![10.0, 10.5, 11.0, 10.2, 10.8];
        let out = build_regression_vector(
            &train,
            &query,
            &v,
            &kind(RegressorId::DecisionTree),
            wide(),
            &mut rng,
        )
        .unwrap();
        assert!(out.fell_back);
        assert_eq!(out.vector, v);
    }

    #[test]
    fn output_respects_bounds() {
        let mut rng = RngStream::new(7);
        let train: Vec<RealVector> = (0..10)
            .map(|_| (0..5).map(|_| rng.uniform(-100.0, 100.0)).collect())
            .collect();
        let query: Vec<RealVector> = (0..10)
            .map(|_| (0..5).map(|_| rng.uniform(-100.0, 100.0)).collect())
            .collect();
        let v: RealVector = (0..5).map(|_| rng.uniform(-100.0, 100.0)).collect();
        let tight = Bounds {
            lower: -1.0,
            upper: 1.0,
        };
        for id in RegressorId::ALL {
            let out =
                build_regression_vector(&train, &query, &v, &kind(id), tight, &mut rng).unwrap();
            assert_eq!(out.vector.len(), 5);
            assert!(out.vector.iter().all(|&x| (-1.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn ridge_interpolates_matching_strategy() {
        // One strategy equals v exactly, another differs; at alpha = 0 an
        // exact interpolant exists, so predictions at the training rows
        // reproduce v within solver tolerance.
        let v: RealVector = vec![3.0, -1.0, 4.0, -1.5, 9.0, -2.6, 5.0, 3.5, -8.9, 7.0];
        let mut train: Vec<RealVector> = vec![v.clone(); 10];
        train[4] = v.iter().map(|x| x * -0.5 + 1.0).collect();
        let query = train.clone();
        let mut lm = kind(RegressorId::RidgeLinear);
        lm.ridge_alpha = 0.0;
        let out = build_regression_vector(
            &train,
            &query,
            &v,
            &lm,
            wide(),
            &mut RngStream::new(8),
        )
        .unwrap();
        assert!(!out.fell_back);
        for (got, want) in out.vector.iter().zip(&v) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
    }

    #[test]
    fn fit_regressor_dispatches_every_kind() {
        let mut rng = RngStream::new(9);
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..10).map(|_| rng.uniform(-1.0, 1.0)).collect())
            .collect();
        let targets: Vec<f64> = (0..10).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let data = RegressionDataset::new(rows.clone(), targets).unwrap();
        for id in RegressorId::ALL {
            let model = fit_regressor(&kind(id), &data, &mut rng).unwrap();
            let p = model.predict(&rows[0]).unwrap();
            assert!(p.is_finite());
        }
    }
}
