//! The six acceptance gates for the benchmark reproduction. The full
//! default experiment (six algorithms, five functions, twenty-five runs
//! each at F = 0.5, CR = 0.9, NP = 10, D = 10, 10,000 evaluations) runs
//! once and is shared; every gate prints one PASS/FAIL line.

use std::sync::OnceLock;

use rede_core::problems::{BenchmarkFunction, FunctionId};
use rede_core::regression::{
    fit_cart, fit_extra_trees, fit_gradient_boosting, fit_random_forest, fit_ridge,
    BoostingConfig, CartConfig, SplitRule,
};
use rede_core::strategies::{binomial_crossover, exponential_crossover};
use rede_core::types::{DeParams, Individual};
use rede_core::{
    bonferroni_dunn_cd, friedman_ranks, friedman_statistic, select, Algorithm,
    RegressionDataset, RegressorId, RegressorKind, ResultsMatrix, RngStream, RunConfig,
};
use rede_harness::config::{resolve_plan, Settings};
use rede_harness::plan::ExperimentPlan;
use rede_harness::report::{collect_cells, mean_matrix, CellOutcomes};
use rede_harness::runner::{execute_plan, RunRecord};

struct Experiment {
    plan: ExperimentPlan,
    records: Vec<RunRecord>,
    cells: Vec<CellOutcomes>,
}

static EXPERIMENT: OnceLock<Experiment> = OnceLock::new();

/// Runs the default experiment exactly once per test process.
fn experiment() -> &'static Experiment {
    EXPERIMENT.get_or_init(|| {
        let plan = resolve_plan(Settings::default()).expect("default plan resolves");
        let mut sink = Vec::new();
        let outcome = execute_plan(&plan, &mut sink, false).expect("experiment executes");
        assert!(
            outcome.failures.is_empty(),
            "default experiment had failing runs: {:?}",
            outcome.failures
        );
        let cells = collect_cells(&plan, &outcome.records);
        Experiment {
            plan,
            records: outcome.records,
            cells,
        }
    })
}

fn cell_mean(ex: &Experiment, algorithm: &str, function: &str) -> f64 {
    let cell = ex
        .cells
        .iter()
        .find(|c| c.algorithm == algorithm && c.function == function)
        .unwrap_or_else(|| panic!("missing cell {algorithm}/{function}"));
    assert!(!cell.values.is_empty(), "empty cell {algorithm}/{function}");
    cell.values.iter().sum::<f64>() / cell.values.len() as f64
}

fn verdict(criterion: &str, detail: &str, ok: bool) {
    use std::io::Write;
    let tag = if ok { "PASS" } else { "FAIL" };
    // Write to the raw stdout handle so the line survives libtest's output
    // capture and one verdict per criterion is visible in a plain
    // `cargo test` run.
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{tag}] {criterion}: {detail}").ok();
    out.flush().ok();
    assert!(ok, "[{tag}] {criterion}: {detail}");
}

#[test]
fn criterion_1_forest_variant_reaches_the_reported_cells() {
    let ex = experiment();
    let gates = [
        ("rastrigin", 1e-8),
        ("sphere", 1e-8),
        ("griewangk", 1e-8),
        ("ackley", 1e-10),
    ];
    let mut ok = true;
    let mut detail = String::from("de+rf means — ");
    for (function, gate) in gates {
        let mean = cell_mean(ex, "de+rf", function);
        let within = mean <= gate;
        ok &= within;
        detail.push_str(&format!(
            "{function} {mean:.3e} (gate {gate:.0e}{}) ",
            if within { "" } else { ", exceeded" }
        ));
    }
    verdict("criterion 1", detail.trim_end(), ok);
}

#[test]
fn criterion_2_baseline_gap_on_the_sphere() {
    let ex = experiment();
    let baseline = cell_mean(ex, "de", "sphere");
    let mut ok = (1e2..=1e4).contains(&baseline);
    let mut detail = format!("de sphere mean {baseline:.3e} in [1e2, 1e4]");
    for token in ["de+rf", "de+ext", "de+gb", "de+dt", "de+lm"] {
        let mean = cell_mean(ex, token, "sphere");
        let improved = mean <= baseline * 1e-4;
        ok &= improved;
        detail.push_str(&format!(
            "; {token} {mean:.3e}{}",
            if improved { "" } else { " (< 4 orders)" }
        ));
    }
    verdict("criterion 2", &detail, ok);
}

#[test]
fn criterion_3_baseline_ranks_worst_overall() {
    let ex = experiment();
    let matrix = mean_matrix(&ex.plan, &ex.cells).expect("mean matrix");
    let ranks = friedman_ranks(&matrix).expect("ranks");
    let tokens = matrix.algorithms();
    let mut order: Vec<usize> = (0..tokens.len()).collect();
    order.sort_by(|&a, &b| ranks.average_ranks[a].total_cmp(&ranks.average_ranks[b]));
    let ordering = order
        .iter()
        .map(|&i| format!("{} {:.2}", tokens[i], ranks.average_ranks[i]))
        .collect::<Vec<_>>()
        .join(", ");
    let baseline = tokens.iter().position(|t| t == "de").expect("de in matrix");
    let ok = (0..tokens.len())
        .all(|i| i == baseline || ranks.average_ranks[i] < ranks.average_ranks[baseline]);
    // The finer ordering among the regression variants is informative
    // only; implementations of the regressors differ too much to gate it.
    verdict(
        "criterion 3",
        &format!("average ranks (best first): {ordering}; de must be last"),
        ok,
    );
}

#[test]
fn criterion_4_every_run_spends_the_exact_budget() {
    let ex = experiment();
    let total = ex.records.len();
    let off_budget = ex
        .records
        .iter()
        .filter(|r| r.evaluations != 10_000)
        .count();
    verdict(
        "criterion 4",
        &format!("{total} runs recorded, {off_budget} off the 10,000-evaluation budget"),
        total == 750 && off_budget == 0,
    );
}

/// Least squares through the normal equations of the intercept-augmented
/// matrix, solved by Gaussian elimination with partial pivoting. Used as
/// an independent check on the ridge solver at alpha = 0.
fn brute_force_least_squares(features: &[Vec<f64>], targets: &[f64]) -> Vec<f64> {
    let n = features.len();
    let k = features[0].len() + 1;
    let row = |i: usize, j: usize| if j == 0 { 1.0 } else { features[i][j - 1] };
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for i in 0..n {
        for a in 0..k {
            rhs[a] += row(i, a) * targets[i];
            for b in 0..k {
                gram[a * k + b] += row(i, a) * row(i, b);
            }
        }
    }
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&r, &s| gram[r * k + col].abs().total_cmp(&gram[s * k + col].abs()))
            .unwrap();
        if pivot != col {
            for j in 0..k {
                gram.swap(col * k + j, pivot * k + j);
            }
            rhs.swap(col, pivot);
        }
        for r in col + 1..k {
            let factor = gram[r * k + col] / gram[col * k + col];
            for j in col..k {
                gram[r * k + j] -= factor * gram[col * k + j];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut beta = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = rhs[col];
        for j in col + 1..k {
            acc -= gram[col * k + j] * beta[j];
        }
        beta[col] = acc / gram[col * k + col];
    }
    beta
}

#[test]
fn criterion_5_property_spot_checks() {
    let mut bad: Vec<&str> = Vec::new();

    // (a) Benchmark identities.
    let f = |id: FunctionId| BenchmarkFunction::new(id, 10).unwrap();
    let identities = f(FunctionId::Rosenbrock).value(&[1.0; 10]) == 0.0
        && f(FunctionId::Rosenbrock).value(&[0.0; 10]) == 9.0
        && f(FunctionId::Rastrigin).value(&[1.0; 10]) == 10.0
        && f(FunctionId::Sphere).value(&[0.0; 10]) == 0.0
        && f(FunctionId::Griewangk).value(&[0.0; 10]) == 0.0
        && f(FunctionId::Ackley).value(&[0.0; 10]).abs() <= 1e-12;
    if !identities {
        bad.push("(a) identities");
    }

    // (b) Crossover invariants over 200 seeded trials.
    let mut crossover_ok = true;
    for seed in 0..200u64 {
        let mut rng = RngStream::new(seed);
        let d = 2 + (seed as usize % 10);
        let target = vec![0.0; d];
        let mutant = vec![1.0; d];
        let cr = (seed as f64 / 200.0).min(1.0);
        let bin = binomial_crossover(&target, &mutant, cr, &mut rng).unwrap();
        crossover_ok &= bin.iter().any(|&x| x == 1.0);
        let exp = exponential_crossover(&target, &mutant, cr, &mut rng).unwrap();
        let picked: Vec<usize> = (0..d).filter(|&j| exp[j] == 1.0).collect();
        crossover_ok &= !picked.is_empty();
        let cyclic_changes = (0..d)
            .filter(|&j| (exp[j] == 1.0) != (exp[(j + 1) % d] == 1.0))
            .count();
        crossover_ok &= cyclic_changes == 2 || picked.len() == d;
    }
    if !crossover_ok {
        bad.push("(b) crossover");
    }

    // (c) Ties admit the trial.
    let parent = Individual {
        position: vec![0.0],
        fitness: Some(1.0),
    };
    let trial = Individual {
        position: vec![9.0],
        fitness: Some(1.0),
    };
    if select(&parent, trial).unwrap().position != vec![9.0] {
        bad.push("(c) selection tie");
    }

    // (d) Monotone best-fitness traces on two small runs.
    for algorithm in [
        Algorithm::Classic,
        Algorithm::Regression(RegressorKind::defaults(RegressorId::DecisionTree)),
    ] {
        let config = RunConfig {
            params: DeParams {
                max_generations: 60,
                ..DeParams::default()
            },
            function: BenchmarkFunction::new(FunctionId::Ackley, 10).unwrap(),
            algorithm,
            seed: 5,
            budget: 600,
        };
        let result = rede_core::run(&config).unwrap();
        if result
            .per_generation_best
            .windows(2)
            .any(|w| w[1] > w[0])
        {
            bad.push("(d) elitism");
            break;
        }
    }

    // (e) Regressor properties on one seeded dataset.
    let mut rng = RngStream::new(42);
    let features: Vec<Vec<f64>> = (0..12)
        .map(|i| {
            let mut row: Vec<f64> = (0..4).map(|_| rng.uniform(-5.0, 5.0)).collect();
            row[0] = i as f64;
            row
        })
        .collect();
    let targets: Vec<f64> = (0..12).map(|_| rng.uniform(-10.0, 10.0)).collect();
    let data = RegressionDataset::new(features.clone(), targets.clone()).unwrap();
    let tree = fit_cart(&data, &CartConfig::default(), &mut rng).unwrap();
    let memorizes = features
        .iter()
        .zip(&targets)
        .all(|(row, &t)| tree.predict(row).unwrap() == t);
    let forest = fit_random_forest(&data, 7, &CartConfig::default(), &mut rng).unwrap();
    let extra = fit_extra_trees(
        &data,
        7,
        &CartConfig {
            split_rule: SplitRule::Extreme,
            ..CartConfig::default()
        },
        &mut rng,
    )
    .unwrap();
    let query = vec![3.5, 0.2, -1.0, 2.2];
    let forest_mean_ok = [forest, extra].iter().all(|model| {
        let members = model.tree_predictions(&query).unwrap();
        let mean = members.iter().sum::<f64>() / members.len() as f64;
        (model.predict(&query).unwrap() - mean).abs() <= 1e-12
    });
    let boosted = fit_gradient_boosting(
        &data,
        &BoostingConfig {
            n_estimators: 25,
            ..BoostingConfig::default()
        },
        &mut rng,
    )
    .unwrap();
    let curve = boosted.staged_training_mse(&data).unwrap();
    let boosting_ok = curve.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let norms: Vec<f64> = [0.0, 1.0, 10.0, 1e3]
        .iter()
        .map(|&alpha| {
            let m = fit_ridge(&data, alpha).unwrap();
            m.weights().iter().map(|w| w * w).sum::<f64>().sqrt()
        })
        .collect();
    let shrinkage_ok = norms.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    if !(memorizes && forest_mean_ok && boosting_ok && shrinkage_ok) {
        bad.push("(e) regressors");
    }

    // (f) Ridge at alpha = 0 against brute-force least squares on 50
    // random datasets.
    let mut ridge_ok = true;
    for seed in 0..50u64 {
        let mut rng = RngStream::new(900 + seed);
        let cols = 2 + (seed as usize % 5);
        let features: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..cols).map(|_| rng.uniform(-4.0, 4.0)).collect())
            .collect();
        let targets: Vec<f64> = (0..10).map(|_| rng.uniform(-10.0, 10.0)).collect();
        let data = RegressionDataset::new(features.clone(), targets.clone()).unwrap();
        let model = fit_ridge(&data, 0.0).unwrap();
        let beta = brute_force_least_squares(&features, &targets);
        for _ in 0..5 {
            let q: Vec<f64> = (0..cols).map(|_| rng.uniform(-6.0, 6.0)).collect();
            let want =
                beta[0] + q.iter().enumerate().map(|(j, v)| beta[j + 1] * v).sum::<f64>();
            let got = model.predict(&q).unwrap();
            ridge_ok &= (got - want).abs() <= 1e-8 * want.abs().max(1.0);
        }
    }
    if !ridge_ok {
        bad.push("(f) least squares");
    }

    // (g) Friedman hand cases.
    let sweep = ResultsMatrix::new(
        vec!["a".into(), "b".into()],
        (0..5).map(|i| format!("f{i}")).collect(),
        vec![vec![1.0; 5], vec![2.0; 5]],
    )
    .unwrap();
    let ranks = friedman_ranks(&sweep).unwrap();
    let chi = friedman_statistic(&ranks.average_ranks, 5).unwrap();
    let cd = bonferroni_dunn_cd(7, 5, 0.05).unwrap();
    if (chi - 5.0).abs() > 1e-12 || (cd - 3.60).abs() > 0.01 {
        bad.push("(g) rank statistics");
    }

    verdict(
        "criterion 5",
        &format!(
            "property spot checks (a)-(g){}{}",
            if bad.is_empty() { " all hold" } else { "; failing: " },
            bad.join(", ")
        ),
        bad.is_empty(),
    );
}

#[test]
fn criterion_6_records_replay_bit_exactly() {
    let ex = experiment();
    let tasks = ex.plan.tasks().expect("plan tasks");
    // One record per algorithm, rotating across functions and run indices.
    let functions = ["rosenbrock", "rastrigin", "sphere", "griewangk", "ackley"];
    let mut checked = 0usize;
    let mut ok = true;
    for (i, token) in ["de", "de+rf", "de+ext", "de+gb", "de+dt", "de+lm"]
        .iter()
        .enumerate()
    {
        let function = functions[i % functions.len()];
        let run_index = (4 * i + 3) % 25;
        let record = ex
            .records
            .iter()
            .find(|r| {
                r.algorithm == *token && r.function == function && r.run_index == run_index
            })
            .expect("record exists");
        let task = tasks
            .iter()
            .find(|t| {
                t.algorithm_token == *token
                    && t.function_token == function
                    && t.run_index == run_index
            })
            .expect("task exists");
        let replay = rede_core::run(&task.config).expect("replay runs");
        ok &= replay.best_fitness.to_bits() == record.best_fitness.to_bits();
        ok &= task.config.seed == record.seed;
        checked += 1;
    }
    verdict(
        "criterion 6",
        &format!("{checked} sampled records replayed from their seeds bit-exactly"),
        ok && checked == 6,
    );
}
