use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rede_core::{BenchmarkFunction, RunConfig};

use rede_harness::config::{parse_config_file, resolve_plan, Settings};
use rede_harness::error::{Error, Result};
use rede_harness::plan::RunTask;
use rede_harness::report::{collect_cells, rank_report, render_summary};
use rede_harness::runner::{execute_plan, replay};

/// Benchmark harness for regression-ensemble differential evolution.
///
/// With no arguments it runs the full comparison: six algorithms (classic
/// DE plus five regression variants) on five benchmark functions, 25 runs
/// each, and writes CSV results plus the Friedman rank analysis.
#[derive(Parser, Debug)]
#[command(name = "rede", version)]
struct Cli {
    /// Algorithms, comma separated: de, de+rf, de+ext, de+gb, de+dt, de+lm [default: all]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    algorithm: Vec<String>,

    /// Functions, comma separated: rosenbrock, rastrigin, sphere, griewangk, ackley [default: all]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    function: Vec<String>,

    /// Problem dimension [default: 10]
    #[arg(long)]
    dim: Option<usize>,

    /// Population size NP [default: 10]
    #[arg(long)]
    np: Option<usize>,

    /// Amplification factor F in [0.1, 1.0] [default: 0.5]
    #[arg(long)]
    f: Option<f64>,

    /// Crossover rate CR in [0.0, 1.0] [default: 0.9]
    #[arg(long)]
    cr: Option<f64>,

    /// Generation limit [default: 1000]
    #[arg(long)]
    tmax: Option<u32>,

    /// Objective-evaluation budget [default: np * tmax]
    #[arg(long)]
    budget: Option<u64>,

    /// Repetitions per (algorithm, function) cell [default: 25]
    #[arg(long)]
    runs: Option<usize>,

    /// Base seed; per-run seeds are derived from it and the cell identity
    #[arg(long)]
    seed: Option<u64>,

    /// Trees per forest / boosting stages [default: 40]
    #[arg(long)]
    estimators: Option<usize>,

    /// Worker threads; 0 picks the machine default [default: 0]
    #[arg(long)]
    jobs: Option<usize>,

    /// Output directory [default: results]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Re-run one recorded run from its exact seed and print the outcome;
    /// requires exactly one --algorithm and one --function
    #[arg(long)]
    replay_seed: Option<u64>,

    /// Flat key=value config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

fn settings_from_cli(cli: &Cli) -> Settings {
    Settings {
        algorithm: (!cli.algorithm.is_empty()).then(|| cli.algorithm.clone()),
        function: (!cli.function.is_empty()).then(|| cli.function.clone()),
        dim: cli.dim,
        np: cli.np,
        f: cli.f,
        cr: cli.cr,
        tmax: cli.tmax,
        budget: cli.budget,
        runs: cli.runs,
        seed: cli.seed,
        estimators: cli.estimators,
        learning_rate: None,
        max_depth: None,
        min_samples_split: None,
        ridge_alpha: None,
        jobs: cli.jobs,
        out: cli.out.clone(),
    }
}

fn replay_run(settings: Settings, seed: u64) -> Result<()> {
    let plan = resolve_plan(settings)?;
    if plan.algorithms.len() != 1 || plan.functions.len() != 1 {
        return Err(Error::invalid(
            "replay-seed",
            "replay needs exactly one --algorithm and one --function",
        ));
    }
    let algorithm = plan.algorithms[0];
    let function_id = plan.functions[0];
    let task = RunTask {
        index: 0,
        algorithm_token: algorithm.token(),
        function_token: function_id.token(),
        run_index: 0,
        config: RunConfig {
            params: plan.params,
            function: BenchmarkFunction::new(function_id, plan.dimension)?,
            algorithm,
            seed,
            budget: plan.budget,
        },
    };
    print!("{}", replay(&task)?);
    Ok(())
}

fn write_file(dir: &std::path::Path, name: &str, content: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| Error::io(path.display().to_string(), e))
}

fn run_experiment(settings: Settings) -> Result<usize> {
    let plan = resolve_plan(settings)?;
    fs::create_dir_all(&plan.output_dir)
        .map_err(|e| Error::io(plan.output_dir.display().to_string(), e))?;

    let runs_path = plan.output_dir.join("runs.csv");
    let file = fs::File::create(&runs_path)
        .map_err(|e| Error::io(runs_path.display().to_string(), e))?;
    let mut writer = BufWriter::new(file);

    let started = Instant::now();
    let outcome = execute_plan(&plan, &mut writer, true)?;
    drop(writer);
    eprintln!(
        "{} runs finished in {:.1} s ({} failed)",
        outcome.records.len() + outcome.failures.len(),
        started.elapsed().as_secs_f64(),
        outcome.failures.len(),
    );

    let cells = collect_cells(&plan, &outcome.records);
    let (summary, warnings) = render_summary(&cells);
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    write_file(&plan.output_dir, "summary.csv", &summary)?;

    let mut written = vec!["runs.csv", "summary.csv"];
    if plan.algorithms.len() >= 2 {
        match rank_report(&plan, &cells) {
            Ok(report) => {
                write_file(&plan.output_dir, "ranks.csv", &report.ranks_csv)?;
                write_file(&plan.output_dir, "friedman.txt", &report.friedman_txt)?;
                write_file(&plan.output_dir, "cd_diagram.svg", &report.diagram_svg)?;
                write_file(&plan.output_dir, "cd_diagram.txt", &report.diagram_txt)?;
                written.extend(["ranks.csv", "friedman.txt", "cd_diagram.svg", "cd_diagram.txt"]);
            }
            Err(e) => eprintln!("warning: rank analysis skipped: {e}"),
        }
    } else {
        eprintln!("note: rank analysis needs at least two algorithms; skipped");
    }
    eprintln!("wrote {} to {}", written.join(", "), plan.output_dir.display());
    Ok(outcome.failures.len())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_settings = match &cli.config {
        Some(path) => match parse_config_file(path) {
            Ok(settings) => settings,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => Settings::default(),
    };
    let settings = settings_from_cli(&cli).or(file_settings);

    let result = match cli.replay_seed {
        Some(seed) => replay_run(settings, seed).map(|()| 0),
        None => run_experiment(settings),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("error: {failed} run(s) failed; see warnings above");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
