//! Per-function summary statistics and the Friedman / Bonferroni-Dunn
//! rank comparison across algorithms.

use crate::error::{Error, Result};

/// Five-number summary of a set of run outcomes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryStats {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub stdev: f64,
}

/// Summarizes final best fitnesses over repeated runs. Needs at least two
/// values so the sample deviation is defined.
pub fn summarize_runs(values: &[f64]) -> Result<SummaryStats> {
    if values.len() < 2 {
        return Err(Error::TooFewValues {
            context: "run summary",
            needed: 2,
            actual: values.len(),
        });
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            context: "run summary",
        });
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok(SummaryStats {
        best: sorted[0],
        worst: sorted[n - 1],
        mean,
        median,
        stdev: (ss / (n - 1) as f64).sqrt(),
    })
}

/// Mean final fitness per algorithm (rows) and function (columns); the
/// input to the rank analysis.
#[derive(Clone, Debug)]
pub struct ResultsMatrix {
    algorithms: Vec<String>,
    functions: Vec<String>,
    mean_values: Vec<Vec<f64>>,
}

impl ResultsMatrix {
    pub fn new(
        algorithms: Vec<String>,
        functions: Vec<String>,
        mean_values: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if algorithms.len() < 2 {
            return Err(Error::TooFewValues {
                context: "rank comparison algorithms",
                needed: 2,
                actual: algorithms.len(),
            });
        }
        if functions.is_empty() {
            return Err(Error::TooFewValues {
                context: "rank comparison functions",
                needed: 1,
                actual: 0,
            });
        }
        if mean_values.len() != algorithms.len() {
            return Err(Error::DimensionMismatch {
                expected: algorithms.len(),
                actual: mean_values.len(),
            });
        }
        for row in &mean_values {
            if row.len() != functions.len() {
                return Err(Error::DimensionMismatch {
                    expected: functions.len(),
                    actual: row.len(),
                });
            }
            if !row.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite {
                    context: "results matrix",
                });
            }
        }
        Ok(ResultsMatrix {
            algorithms,
            functions,
            mean_values,
        })
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn functions(&self) -> &[String] {
        &self.functions
    }

    pub fn value(&self, algorithm: usize, function: usize) -> f64 {
        self.mean_values[algorithm][function]
    }
}

/// Per-function ranks (`ranks[algorithm][function]`) plus each algorithm's
/// average rank across functions.
#[derive(Clone, Debug)]
pub struct FriedmanRanks {
    pub ranks: Vec<Vec<f64>>,
    pub average_ranks: Vec<f64>,
}

/// Ranks algorithms per function, ascending by mean value (rank 1 = lowest
/// fitness = best). Exact ties share the average of their positions.
pub fn friedman_ranks(matrix: &ResultsMatrix) -> Result<FriedmanRanks> {
    let k = matrix.algorithms.len();
    let n = matrix.functions.len();
    let mut ranks = vec![vec![0.0; n]; k];
    let mut order: Vec<usize> = Vec::with_capacity(k);

    for f in 0..n {
        order.clear();
        order.extend(0..k);
        order.sort_unstable_by(|&a, &b| matrix.value(a, f).total_cmp(&matrix.value(b, f)));
        let mut i = 0;
        while i < k {
            let mut j = i + 1;
            while j < k && matrix.value(order[j], f) == matrix.value(order[i], f) {
                j += 1;
            }
            // Positions i+1 ..= j (1-based) share one averaged rank.
            let shared = (i + 1 + j) as f64 / 2.0;
            for &a in &order[i..j] {
                ranks[a][f] = shared;
            }
            i = j;
        }
    }

    let average_ranks = ranks
        .iter()
        .map(|row| row.iter().sum::<f64>() / n as f64)
        .collect();
    Ok(FriedmanRanks {
        ranks,
        average_ranks,
    })
}

/// Friedman chi-square over average ranks: with k algorithms and N
/// functions, chi2 = [12N / (k(k+1))] (sum R_j^2 - k(k+1)^2 / 4).
pub fn friedman_statistic(average_ranks: &[f64], n: usize) -> Result<f64> {
    let k = average_ranks.len();
    if k < 2 {
        return Err(Error::TooFewValues {
            context: "Friedman statistic algorithms",
            needed: 2,
            actual: k,
        });
    }
    if n == 0 {
        return Err(Error::TooFewValues {
            context: "Friedman statistic functions",
            needed: 1,
            actual: 0,
        });
    }
    let kf = k as f64;
    let nf = n as f64;
    let sum_sq: f64 = average_ranks.iter().map(|r| r * r).sum();
    Ok(12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0))
}

/// Two-tailed Bonferroni-Dunn critical values q_alpha(k), the normal
/// quantile z at alpha / (2(k-1)), for k = 2..=10 algorithms. Demšar
/// (2006, "Statistical comparisons of classifiers over multiple data
/// sets") tabulates the same quantity; the entries here were recomputed
/// from the normal quantile to four decimals. The published table prints
/// 2.724 at k = 9, alpha = 0.05 where the exact quantile is 2.7344.
const Q_BONFERRONI_DUNN_05: [f64; 9] = [
    1.9600, 2.2414, 2.3940, 2.4977, 2.5758, 2.6383, 2.6901, 2.7344, 2.7729,
];
const Q_BONFERRONI_DUNN_10: [f64; 9] = [
    1.6449, 1.9600, 2.1280, 2.2414, 2.3263, 2.3940, 2.4500, 2.4977, 2.5392,
];

/// Critical difference for the Bonferroni-Dunn test:
/// CD = q_alpha(k) sqrt(k(k+1) / 6N). Supported for k in 2..=10 and alpha
/// in {0.05, 0.10}.
pub fn bonferroni_dunn_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    if !(2..=10).contains(&k) {
        return Err(Error::invalid(
            "k",
            format!("{k} is outside the tabulated range 2..=10"),
        ));
    }
    if n == 0 {
        return Err(Error::invalid("n", "needs at least one function"));
    }
    let table = if alpha == 0.05 {
        &Q_BONFERRONI_DUNN_05
    } else if alpha == 0.10 {
        &Q_BONFERRONI_DUNN_10
    } else {
        return Err(Error::invalid(
            "alpha",
            format!("{alpha} is not tabulated (use 0.05 or 0.10)"),
        ));
    };
    let q = table[k - 2];
    let kf = k as f64;
    Ok(q * (kf * (kf + 1.0) / (6.0 * n as f64)).sqrt())
}

/// The rank analysis bundle: average ranks, the chi-square statistic and
/// the critical difference at the chosen significance level.
#[derive(Clone, Debug)]
pub struct FriedmanOutcome {
    pub average_ranks: Vec<f64>,
    pub statistic: f64,
    pub critical_difference: f64,
    pub alpha: f64,
}

/// Full analysis of a results matrix: ranks, statistic and critical
/// difference in one call.
pub struct FriedmanAnalysis {
    pub ranks: FriedmanRanks,
    pub outcome: FriedmanOutcome,
}

pub fn friedman_analysis(matrix: &ResultsMatrix, alpha: f64) -> Result<FriedmanAnalysis> {
    let ranks = friedman_ranks(matrix)?;
    let statistic = friedman_statistic(&ranks.average_ranks, matrix.functions().len())?;
    let critical_difference = bonferroni_dunn_cd(
        matrix.algorithms().len(),
        matrix.functions().len(),
        alpha,
    )?;
    Ok(FriedmanAnalysis {
        outcome: FriedmanOutcome {
            average_ranks: ranks.average_ranks.clone(),
            statistic,
            critical_difference,
            alpha,
        },
        ranks,
    })
}

/// Renders the critical-difference diagram: each algorithm sits at its
/// average rank on a shared axis with an interval of total length CD
/// centered on it, so two algorithms differ significantly exactly when
/// their intervals do not overlap. Returns the SVG and plain-text forms;
/// both are deterministic bytes for identical input.
pub fn render_cd_diagram(outcome: &FriedmanOutcome, labels: &[&str]) -> (String, String) {
    assert_eq!(
        labels.len(),
        outcome.average_ranks.len(),
        "one label per ranked algorithm"
    );
    let k = labels.len();
    let cd = outcome.critical_difference;
    let half = cd / 2.0;

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_unstable_by(|&a, &b| {
        outcome.average_ranks[a]
            .total_cmp(&outcome.average_ranks[b])
            .then_with(|| labels[a].cmp(labels[b]))
    });

    let lo = 1.0 - half - 0.25;
    let hi = k as f64 + half + 0.25;
    let span = hi - lo;

    // SVG form.
    let width = 640.0;
    let margin = 90.0;
    let axis_w = width - 2.0 * margin;
    let x = |rank: f64| margin + (rank - lo) / span * axis_w;
    let row_h = 26.0;
    let axis_y = 40.0;
    let height = axis_y + 30.0 + row_h * k as f64 + 20.0;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"monospace\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "  <title>Average ranks with Bonferroni-Dunn critical difference {:.4} at alpha {:.2}</title>\n",
        cd, outcome.alpha
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{axis_y}\" x2=\"{:.2}\" y2=\"{axis_y}\" stroke=\"black\"/>\n",
        x(lo),
        x(hi)
    ));
    let mut tick = 1;
    while tick <= k {
        let tx = x(tick as f64);
        svg.push_str(&format!(
            "  <line x1=\"{tx:.2}\" y1=\"{:.2}\" x2=\"{tx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            axis_y - 4.0,
            axis_y + 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{tx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{tick}</text>\n",
            axis_y - 8.0
        ));
        tick += 1;
    }
    for (row, &a) in order.iter().enumerate() {
        let rank = outcome.average_ranks[a];
        let y = axis_y + 30.0 + row_h * row as f64;
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"steelblue\" stroke-width=\"3\"/>\n",
            x(rank - half),
            x(rank + half)
        ));
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"black\"/>\n",
            x(rank)
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            margin - 8.0,
            y + 4.0,
            labels[a]
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\">{rank:.4}</text>\n",
            width - margin + 8.0,
            y + 4.0
        ));
    }
    svg.push_str("</svg>\n");

    // Plain-text form on the same scale.
    let cols = 61usize;
    let cell = |rank: f64| -> usize {
        let t = (rank - lo) / span;
        ((t * (cols - 1) as f64).round() as isize).clamp(0, cols as isize - 1) as usize
    };
    let label_w = labels.iter().map(|l| l.len()).max().unwrap_or(0).max(9);
    let mut txt = String::new();
    txt.push_str(&format!(
        "average ranks, critical difference {:.4} (alpha {:.2})\n",
        cd, outcome.alpha
    ));
    txt.push_str(&format!(
        "intervals span rank +/- {half:.4}; non-overlap means significant difference\n\n"
    ));
    let mut axis = vec![b'-'; cols];
    let mut tick_labels = vec![b' '; cols + 8];
    for t in 1..=k {
        let c = cell(t as f64);
        axis[c] = b'+';
        let s = t.to_string();
        for (i, ch) in s.bytes().enumerate() {
            tick_labels[c + i] = ch;
        }
    }
    txt.push_str(&format!(
        "{:label_w$}  {}\n",
        "",
        String::from_utf8_lossy(&axis)
    ));
    txt.push_str(&format!(
        "{:label_w$}  {}\n",
        "",
        String::from_utf8_lossy(&tick_labels).trim_end()
    ));
    for &a in &order {
        let rank = outcome.average_ranks[a];
        let mut row = vec![b' '; cols];
        let (c_lo, c_hi) = (cell(rank - half), cell(rank + half));
        for c in row.iter_mut().take(c_hi + 1).skip(c_lo) {
            *c = b'=';
        }
        row[cell(rank)] = b'O';
        txt.push_str(&format!(
            "{:label_w$}  {}  {rank:.4}\n",
            labels[a],
            String::from_utf8_lossy(&row)
        ));
    }
    (svg, txt)
}
