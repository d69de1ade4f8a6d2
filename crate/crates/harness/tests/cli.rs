//! End-to-end tests of the command-line binary: output files, config
//! precedence, determinism across reruns, replay, and error reporting.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rede_harness::format::sci;
use rede_harness::report::cell_stats;

fn rede(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rede"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// runs.csv lines with the wall-time column removed; wall time is the one
/// legitimately nondeterministic field.
fn without_wall_time(runs_csv: &str) -> String {
    runs_csv
        .lines()
        .map(|line| line.rsplit_once(',').expect("csv line").0)
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn small_experiment_writes_every_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = rede(&[
        "--algorithm",
        "de,de+dt,de+lm",
        "--function",
        "sphere,ackley",
        "--tmax",
        "30",
        "--runs",
        "3",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    let runs = read(&out, "runs.csv");
    assert_eq!(runs.lines().count(), 1 + 3 * 2 * 3);
    assert!(runs.starts_with(
        "algorithm,function,dimension,run,seed,best_fitness,evaluations,wall_time_ms"
    ));
    let summary = read(&out, "summary.csv");
    assert_eq!(summary.lines().count(), 1 + 3 * 2);
    assert!(summary.starts_with("algorithm,function,best,worst,mean,median,stdev"));
    for name in ["ranks.csv", "friedman.txt", "cd_diagram.svg", "cd_diagram.txt"] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    assert!(read(&out, "friedman.txt").contains("critical difference"));
    assert!(read(&out, "cd_diagram.svg").starts_with("<svg"));
}

#[test]
fn reruns_are_identical_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "--algorithm".into(),
            "de,de+dt".into(),
            "--function".into(),
            "griewangk,ackley".into(),
            "--tmax".into(),
            "25".into(),
            "--runs".into(),
            "4".into(),
            "--seed".into(),
            "21".into(),
            "--jobs".into(),
            "2".into(),
            "--out".into(),
            out.to_string(),
        ]
    };
    let first = dir.path().join("a");
    let second = dir.path().join("b");
    for out in [&first, &second] {
        let argv = args(out.to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert!(rede(&argv).status.success());
    }
    assert_eq!(
        without_wall_time(&read(&first, "runs.csv")),
        without_wall_time(&read(&second, "runs.csv")),
    );
    for name in ["summary.csv", "ranks.csv", "friedman.txt", "cd_diagram.svg"] {
        assert_eq!(read(&first, name), read(&second, name), "{name} differs");
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bench.conf");
    fs::write(
        &config,
        "algorithm = de+dt\nfunction = sphere\ntmax = 30\nruns = 2\nseed = 9\n",
    )
    .unwrap();
    let out = dir.path().join("results");
    let output = rede(&[
        "--config",
        config.to_str().unwrap(),
        "--tmax",
        "40",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let runs = read(&out, "runs.csv");
    let rows: Vec<&str> = runs.lines().skip(1).collect();
    // runs = 2 comes from the file; tmax = 40 from the flag makes the
    // budget np * tmax = 400.
    assert_eq!(rows.len(), 2);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "de+dt");
        assert_eq!(fields[1], "sphere");
        assert_eq!(fields[6], "400");
    }
}

#[test]
fn replay_reproduces_the_recorded_best_fitness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let base = [
        "--algorithm",
        "de+lm",
        "--function",
        "griewangk",
        "--tmax",
        "25",
    ];
    let mut run_args = base.to_vec();
    run_args.extend(["--runs", "2", "--seed", "19", "--out", out.to_str().unwrap()]);
    assert!(rede(&run_args).status.success());

    let runs = read(&out, "runs.csv");
    let row = runs.lines().nth(2).expect("second record");
    let fields: Vec<&str> = row.split(',').collect();
    let (seed, recorded) = (fields[4], fields[5]);

    let mut replay_args = base.to_vec();
    replay_args.extend(["--replay-seed", seed]);
    let output = rede(&replay_args);
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8(output.stdout).unwrap();
    let replayed: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("best_fitness="))
        .expect("replay prints best_fitness")
        .parse()
        .unwrap();
    // Publishing the replayed value must give back the recorded field.
    assert_eq!(sci(replayed), recorded);
    assert!(stdout.contains(&format!("seed={seed}")));
    assert!(stdout.contains("evaluations=250"));
}

#[test]
fn summary_is_recomputable_from_the_runs_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let output = rede(&[
        "--algorithm",
        "de,de+lm",
        "--function",
        "sphere,rastrigin",
        "--tmax",
        "20",
        "--runs",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");

    let runs = read(&out, "runs.csv");
    let mut expected = String::from("algorithm,function,best,worst,mean,median,stdev\n");
    for algorithm in ["de", "de+lm"] {
        for function in ["sphere", "rastrigin"] {
            let values: Vec<f64> = runs
                .lines()
                .skip(1)
                .filter_map(|row| {
                    let fields: Vec<&str> = row.split(',').collect();
                    (fields[0] == algorithm && fields[1] == function)
                        .then(|| fields[5].parse().unwrap())
                })
                .collect();
            assert_eq!(values.len(), 5);
            let stats = cell_stats(&values).unwrap();
            expected.push_str(&format!(
                "{algorithm},{function},{},{},{},{},{}\n",
                sci(stats.best),
                sci(stats.worst),
                sci(stats.mean),
                sci(stats.median),
                sci(stats.stdev),
            ));
        }
    }
    assert_eq!(read(&out, "summary.csv"), expected);
}

#[test]
fn errors_name_the_offending_input() {
    let dir = tempfile::tempdir().unwrap();

    let output = rede(&["--cr", "1.5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("`cr`"), "stderr: {stderr}");

    let output = rede(&["--algorithm", "de+svm"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("de+svm"), "stderr: {stderr}");

    let config = dir.path().join("bad.conf");
    fs::write(&config, "tmax = 30\nmax_dep = 3\n").unwrap();
    let output = rede(&["--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("max_dep"), "stderr: {stderr}");
}
