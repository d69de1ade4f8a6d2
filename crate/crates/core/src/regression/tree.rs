//! CART regression trees: recursive binary splitting with mean-valued
//! leaves. One implementation serves the single decision tree, both forest
//! variants, and the boosting stages; they differ only in split rule, depth
//! limit, and which sample multiset they train on.

use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::RegressionDataset;

/// How a node picks its `(feature, threshold)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitRule {
    /// Exhaustive search minimizing the summed squared error of the two
    /// children; thresholds are midpoints between adjacent distinct feature
    /// values. Ties resolve to the lowest feature index, then the lowest
    /// threshold.
    Best,
    /// A uniformly random splittable feature with a threshold drawn
    /// uniformly between that feature's minimum and maximum at the node.
    Extreme,
}

/// Growth limits for one tree.
#[derive(Clone, Copy, Debug)]
pub struct CartConfig {
    pub split_rule: SplitRule,
    pub min_samples_split: usize,
    /// `None` grows until nodes are pure or unsplittable.
    pub max_depth: Option<u32>,
}

impl Default for CartConfig {
    fn default() -> Self {
        CartConfig {
            split_rule: SplitRule::Best,
            min_samples_split: 2,
            max_depth: None,
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf {
        prediction: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A fitted regression tree. Rows route left when
/// `row[feature] <= threshold`.
#[derive(Clone, Debug)]
pub struct CartTree {
    nodes: Vec<Node>,
    features: usize,
}

/// Fits a tree on every row of `data`.
pub fn fit_cart(
    data: &RegressionDataset,
    config: &CartConfig,
    rng: &mut RngStream,
) -> Result<CartTree> {
    let samples: Vec<usize> = (0..data.rows()).collect();
    fit_cart_on(data, &samples, config, rng)
}

/// Fits a tree on an explicit sample multiset (indices into `data`'s rows,
/// repetitions allowed). Bootstrap resampling passes its draw here.
pub fn fit_cart_on(
    data: &RegressionDataset,
    samples: &[usize],
    config: &CartConfig,
    rng: &mut RngStream,
) -> Result<CartTree> {
    if data.rows() == 0 || samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut tree = CartTree {
        nodes: Vec::new(),
        features: data.cols(),
    };
    let mut work: Vec<usize> = samples.to_vec();
    let n = work.len();
    let mut builder = Builder {
        data,
        config,
        rng,
        scratch: Vec::with_capacity(n),
    };
    builder.grow(&mut tree.nodes, &mut work, 0)?;
    Ok(tree)
}

struct Builder<'a> {
    data: &'a RegressionDataset,
    config: &'a CartConfig,
    rng: &'a mut RngStream,
    scratch: Vec<(f64, f64)>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    /// Summed squared error of both children; lower is better.
    children_sse: f64,
}

impl Builder<'_> {
    /// Appends the subtree for `samples` to `nodes`, returning its root
    /// index. Recursion depth is bounded by the sample count because every
    /// split strictly shrinks both sides.
    fn grow(&mut self, nodes: &mut Vec<Node>, samples: &mut [usize], depth: u32) -> Result<usize> {
        let targets = self.data.targets();
        let mean = samples.iter().map(|&s| targets[s]).sum::<f64>() / samples.len() as f64;

        let depth_reached = self
            .config
            .max_depth
            .is_some_and(|limit| depth >= limit);
        let too_small = samples.len() < self.config.min_samples_split;
        let pure = samples
            .iter()
            .all(|&s| targets[s] == targets[samples[0]]);

        let split = if depth_reached || too_small || pure {
            None
        } else {
            match self.config.split_rule {
                SplitRule::Best => self.best_split(samples),
                SplitRule::Extreme => self.extreme_split(samples),
            }
        };

        let Some(candidate) = split else {
            nodes.push(Node::Leaf { prediction: mean });
            return Ok(nodes.len() - 1);
        };

        let mid = partition(self.data, samples, candidate.feature, candidate.threshold);
        debug_assert!(mid > 0 && mid < samples.len());
        let slot = nodes.len();
        nodes.push(Node::Leaf { prediction: mean }); // placeholder until children exist
        let (left_samples, right_samples) = samples.split_at_mut(mid);
        let left = self.grow(nodes, left_samples, depth + 1)?;
        let right = self.grow(nodes, right_samples, depth + 1)?;
        nodes[slot] = Node::Split {
            feature: candidate.feature,
            threshold: candidate.threshold,
            left,
            right,
        };
        Ok(slot)
    }

    /// Exhaustive variance-reduction search. Returns `None` when every
    /// feature is constant across the node's samples.
    fn best_split(&mut self, samples: &[usize]) -> Option<Candidate> {
        let mut best: Option<Candidate> = None;
        for feature in 0..self.data.cols() {
            self.scratch.clear();
            for &s in samples {
                self.scratch
                    .push((self.data.feature(s, feature), self.data.targets()[s]));
            }
            self.scratch
                .sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

            let total_sum: f64 = self.scratch.iter().map(|p| p.1).sum();
            let total_sq: f64 = self.scratch.iter().map(|p| p.1 * p.1).sum();
            let n = self.scratch.len();

            let mut left_sum = 0.0;
            let mut left_sq = 0.0;
            for i in 0..n - 1 {
                left_sum += self.scratch[i].1;
                left_sq += self.scratch[i].1 * self.scratch[i].1;
                let (lo, hi) = (self.scratch[i].0, self.scratch[i + 1].0);
                if lo == hi {
                    continue;
                }
                // The midpoint of two adjacent floats can round up onto
                // `hi`, which would send every sample left; `lo` itself
                // still separates the pair under the `<=` partition.
                let mut threshold = lo + 0.5 * (hi - lo);
                if threshold >= hi {
                    threshold = lo;
                }
                let left_n = (i + 1) as f64;
                let right_n = (n - i - 1) as f64;
                let right_sum = total_sum - left_sum;
                let right_sq = total_sq - left_sq;
                let children_sse = (left_sq - left_sum * left_sum / left_n)
                    + (right_sq - right_sum * right_sum / right_n);
                let improves = match &best {
                    None => true,
                    Some(b) => children_sse < b.children_sse,
                };
                if improves {
                    best = Some(Candidate {
                        feature,
                        threshold,
                        children_sse,
                    });
                }
            }
        }
        best
    }

    /// Uniform draw over splittable features (those with spread at the
    /// node), then a uniform threshold strictly inside the value range.
    fn extreme_split(&mut self, samples: &[usize]) -> Option<Candidate> {
        let mut splittable = [0usize; 64];
        let mut splittable_vec;
        let cols = self.data.cols();
        let slots: &mut [usize] = if cols <= 64 {
            &mut splittable
        } else {
            splittable_vec = vec![0usize; cols];
            &mut splittable_vec
        };
        let mut count = 0;
        for feature in 0..cols {
            let (min, max) = feature_range(self.data, samples, feature);
            if min < max {
                slots[count] = feature;
                count += 1;
            }
        }
        if count == 0 {
            return None;
        }
        let feature = slots[self.rng.index(count)];
        let (min, max) = feature_range(self.data, samples, feature);
        let mut threshold = self.rng.uniform(min, max);
        // uniform() is half-open, so `min` itself can come back (and tiny
        // ranges can round onto it); nudge off the boundary, falling back to
        // the midpoint for degenerate ranges.
        let mut tries = 0;
        while threshold <= min && tries < 4 {
            threshold = self.rng.uniform(min, max);
            tries += 1;
        }
        if threshold <= min {
            threshold = min + 0.5 * (max - min);
        }
        // Rounding can also land on `max`, which would make the right side
        // empty; `min` always yields a valid two-sided partition.
        if threshold >= max {
            threshold = min;
        }
        Some(Candidate {
            feature,
            threshold,
            children_sse: f64::NAN,
        })
    }
}

fn feature_range(data: &RegressionDataset, samples: &[usize], feature: usize) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &s in samples {
        let v = data.feature(s, feature);
        min = min.min(v);
        max = max.max(v);
    }
    (min, max)
}

/// Reorders `samples` so rows with `feature <= threshold` come first;
/// returns the boundary position.
fn partition(
    data: &RegressionDataset,
    samples: &mut [usize],
    feature: usize,
    threshold: f64,
) -> usize {
    let mut mid = 0;
    for i in 0..samples.len() {
        if data.feature(samples[i], feature) <= threshold {
            samples.swap(i, mid);
            mid += 1;
        }
    }
    mid
}

impl CartTree {
    /// Routes one feature row to its leaf.
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.features {
            return Err(Error::DimensionMismatch {
                expected: self.features,
                actual: row.len(),
            });
        }
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { prediction } => return Ok(*prediction),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of leaves; equals internal nodes + 1 in a binary tree.
    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }
}
