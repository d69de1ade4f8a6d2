//! Derived outputs: per-cell summaries, rank tables, the Friedman report
//! and the critical-difference diagram.

use std::collections::BTreeMap;

use rede_core::{
    friedman_analysis, summarize_runs, FriedmanAnalysis, ResultsMatrix, SummaryStats,
};

use crate::error::{Error, Result};
use crate::format::{published, sci};
use crate::plan::ExperimentPlan;
use crate::runner::RunRecord;

pub const SUMMARY_HEADER: &str = "algorithm,function,best,worst,mean,median,stdev";

/// Upper critical values of the chi-square distribution at alpha = 0.05
/// for 1..=9 degrees of freedom (standard tables; scipy's
/// `chi2.ppf(0.95, df)` reproduces them).
const CHI_SQUARE_CRITICAL_05: [f64; 9] = [
    3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190,
];

/// One (algorithm, function) cell's collected outcomes.
pub struct CellOutcomes {
    pub algorithm: String,
    pub function: &'static str,
    /// Final fitnesses exactly as published in `runs.csv`, so every
    /// statistic derived here can be recomputed from that file.
    pub values: Vec<f64>,
}

/// Groups records by cell, preserving plan order. Values are pushed
/// through the serialization round-trip.
pub fn collect_cells(plan: &ExperimentPlan, records: &[RunRecord]) -> Vec<CellOutcomes> {
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut cells: Vec<CellOutcomes> = Vec::new();
    for (a, algorithm) in plan.algorithms.iter().enumerate() {
        let token = algorithm.token();
        for (f, function) in plan.functions.iter().enumerate() {
            index.insert((a, f), cells.len());
            cells.push(CellOutcomes {
                algorithm: token.clone(),
                function: function.token(),
                values: Vec::new(),
            });
        }
    }
    for record in records {
        let a = plan
            .algorithms
            .iter()
            .position(|alg| alg.token() == record.algorithm);
        let f = plan
            .functions
            .iter()
            .position(|func| func.token() == record.function);
        if let (Some(a), Some(f)) = (a, f) {
            cells[index[&(a, f)]].values.push(published(record.best_fitness));
        }
    }
    cells
}

/// Renders `summary.csv`: one row per cell with Best, Worst, Mean, Median
/// and StDev. Cells with fewer than two completed runs are skipped and
/// reported back as warnings.
pub fn render_summary(cells: &[CellOutcomes]) -> (String, Vec<String>) {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    let mut warnings = Vec::new();
    for cell in cells {
        match summarize_runs(&cell.values) {
            Ok(stats) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    cell.algorithm,
                    cell.function,
                    sci(stats.best),
                    sci(stats.worst),
                    sci(stats.mean),
                    sci(stats.median),
                    sci(stats.stdev),
                ));
            }
            Err(e) => warnings.push(format!(
                "cell {}/{} has no summary ({} completed runs): {e}",
                cell.algorithm,
                cell.function,
                cell.values.len(),
            )),
        }
    }
    (out, warnings)
}

/// Recomputes the published summary statistics for one cell; used by the
/// consistency checks in the test suite.
pub fn cell_stats(values: &[f64]) -> Result<SummaryStats> {
    Ok(summarize_runs(values)?)
}

/// The mean-fitness matrix feeding the rank analysis: means over the
/// published per-run values, themselves round-tripped through the
/// serialized form used in `summary.csv`.
pub fn mean_matrix(plan: &ExperimentPlan, cells: &[CellOutcomes]) -> Result<ResultsMatrix> {
    let k = plan.algorithms.len();
    let n = plan.functions.len();
    let mut means = vec![vec![0.0; n]; k];
    for (i, cell) in cells.iter().enumerate() {
        if cell.values.is_empty() {
            return Err(Error::invalid(
                "runs",
                format!(
                    "cell {}/{} finished no runs; the rank analysis needs every cell",
                    cell.algorithm, cell.function,
                ),
            ));
        }
        let mean = cell.values.iter().sum::<f64>() / cell.values.len() as f64;
        means[i / n][i % n] = published(mean);
    }
    Ok(ResultsMatrix::new(
        plan.algorithms.iter().map(|a| a.token()).collect(),
        plan.functions.iter().map(|f| f.token().to_string()).collect(),
        means,
    )?)
}

/// Renders `ranks.csv`: per-function ranks plus the average rank, one row
/// per algorithm in plan order.
pub fn render_ranks(matrix: &ResultsMatrix, analysis: &FriedmanAnalysis) -> String {
    let mut out = String::from("algorithm");
    for function in matrix.functions() {
        out.push(',');
        out.push_str(function);
    }
    out.push_str(",average_rank\n");
    for (i, algorithm) in matrix.algorithms().iter().enumerate() {
        out.push_str(algorithm);
        for f in 0..matrix.functions().len() {
            out.push_str(&format!(",{}", analysis.ranks.ranks[i][f]));
        }
        out.push_str(&format!(",{}\n", analysis.ranks.average_ranks[i]));
    }
    out
}

/// Renders `friedman.txt`: the statistic, its significance verdict, the
/// critical difference and the pairwise comparison against the
/// top-ranked algorithm.
pub fn render_friedman(matrix: &ResultsMatrix, analysis: &FriedmanAnalysis) -> String {
    let outcome = &analysis.outcome;
    let k = matrix.algorithms().len();
    let n = matrix.functions().len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        outcome.average_ranks[a]
            .total_cmp(&outcome.average_ranks[b])
            .then_with(|| matrix.algorithms()[a].cmp(&matrix.algorithms()[b]))
    });

    let mut out = String::new();
    out.push_str("Friedman rank analysis over mean final fitness\n");
    out.push_str(&format!("algorithms (k) = {k}\n"));
    out.push_str(&format!("functions  (N) = {n}\n\n"));

    out.push_str("average ranks (1 = best):\n");
    for &i in &order {
        out.push_str(&format!(
            "  {:<8} {:.6}\n",
            matrix.algorithms()[i],
            outcome.average_ranks[i],
        ));
    }
    out.push('\n');

    let df = k - 1;
    out.push_str(&format!("chi-square statistic = {:.6}\n", outcome.statistic));
    out.push_str(&format!("degrees of freedom   = {df}\n"));
    if (1..=CHI_SQUARE_CRITICAL_05.len()).contains(&df) {
        let critical = CHI_SQUARE_CRITICAL_05[df - 1];
        out.push_str(&format!(
            "critical value (alpha = 0.05) = {critical:.4}\n",
        ));
        out.push_str(&format!(
            "significant at alpha = 0.05: {}\n",
            if outcome.statistic > critical { "yes" } else { "no" },
        ));
    }
    out.push('\n');

    out.push_str(&format!(
        "Bonferroni-Dunn critical difference (alpha = {}) = {:.6}\n",
        outcome.alpha, outcome.critical_difference,
    ));
    let top = order[0];
    out.push_str(&format!(
        "pairwise against the top-ranked algorithm ({}):\n",
        matrix.algorithms()[top],
    ));
    for &i in order.iter().skip(1) {
        let delta = outcome.average_ranks[i] - outcome.average_ranks[top];
        out.push_str(&format!(
            "  {:<8} rank difference {:.6} -> {}\n",
            matrix.algorithms()[i],
            delta,
            if delta > outcome.critical_difference {
                "significant"
            } else {
                "not significant"
            },
        ));
    }
    out
}

/// All rank outputs in one bundle.
#[derive(Debug)]
pub struct RankReport {
    pub ranks_csv: String,
    pub friedman_txt: String,
    pub diagram_svg: String,
    pub diagram_txt: String,
}

pub fn rank_report(plan: &ExperimentPlan, cells: &[CellOutcomes]) -> Result<RankReport> {
    let matrix = mean_matrix(plan, cells)?;
    let analysis = friedman_analysis(&matrix, 0.05)?;
    let labels: Vec<&str> = matrix.algorithms().iter().map(String::as_str).collect();
    let (diagram_svg, diagram_txt) = rede_core::render_cd_diagram(&analysis.outcome, &labels);
    Ok(RankReport {
        ranks_csv: render_ranks(&matrix, &analysis),
        friedman_txt: render_friedman(&matrix, &analysis),
        diagram_svg,
        diagram_txt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve_plan, Settings};
    use crate::runner::execute_plan;

    fn small_outcome() -> (ExperimentPlan, Vec<RunRecord>) {
        let plan = resolve_plan(Settings {
            algorithm: Some(vec!["de".into(), "de+dt".into()]),
            function: Some(vec!["sphere".into(), "ackley".into()]),
            dim: Some(6),
            tmax: Some(40),
            runs: Some(3),
            seed: Some(11),
            jobs: Some(1),
            ..Settings::default()
        })
        .unwrap();
        let mut sink = Vec::new();
        let outcome = execute_plan(&plan, &mut sink, false).unwrap();
        (plan, outcome.records)
    }

    #[test]
    fn summary_has_one_row_per_cell() {
        let (plan, records) = small_outcome();
        let cells = collect_cells(&plan, &records);
        let (summary, warnings) = render_summary(&cells);
        assert!(warnings.is_empty());
        let lines: Vec<&str> = summary.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER);
        assert_eq!(lines.len(), 1 + 4);
        assert!(lines[1].starts_with("de,sphere,"));
        assert!(lines[4].starts_with("de+dt,ackley,"));
    }

    #[test]
    fn summary_recomputes_from_published_values() {
        let (plan, records) = small_outcome();
        let cells = collect_cells(&plan, &records);
        let (summary, _) = render_summary(&cells);
        for (line, cell) in summary.lines().skip(1).zip(&cells) {
            let fields: Vec<&str> = line.split(',').collect();
            let stats = cell_stats(&cell.values).unwrap();
            assert_eq!(fields[2], sci(stats.best));
            assert_eq!(fields[4], sci(stats.mean));
            assert_eq!(fields[6], sci(stats.stdev));
        }
    }

    #[test]
    fn single_run_cells_warn_instead_of_failing() {
        let (plan, records) = small_outcome();
        let mut cells = collect_cells(&plan, &records);
        cells[0].values.truncate(1);
        let (summary, warnings) = render_summary(&cells);
        assert_eq!(summary.lines().count(), 1 + 3);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("de/sphere"), "{}", warnings[0]);
    }

    #[test]
    fn rank_outputs_cover_every_algorithm() {
        let (plan, records) = small_outcome();
        let cells = collect_cells(&plan, &records);
        let report = rank_report(&plan, &cells).unwrap();
        let lines: Vec<&str> = report.ranks_csv.lines().collect();
        assert_eq!(lines[0], "algorithm,sphere,ackley,average_rank");
        assert_eq!(lines.len(), 3);
        assert!(report.friedman_txt.contains("algorithms (k) = 2"));
        assert!(report.friedman_txt.contains("significant at alpha = 0.05:"));
        assert!(report.diagram_svg.starts_with("<svg"));
        assert!(!report.diagram_txt.is_empty());
    }

    #[test]
    fn missing_cell_blocks_the_rank_analysis() {
        let (plan, records) = small_outcome();
        let mut cells = collect_cells(&plan, &records);
        cells[2].values.clear();
        let err = rank_report(&plan, &cells).unwrap_err().to_string();
        assert!(err.contains("de+dt/sphere"), "{err}");
    }
}
