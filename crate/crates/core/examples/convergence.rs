//! Runs one algorithm-function pair at the benchmark defaults across a
//! seed range and prints the final best per seed.
//!
//! Usage: convergence <algorithm> <function> <first-seed> <count> [--trace]
//!
//! With --trace, the best-so-far is printed every 100 generations for the
//! first seed, which makes stalls visible.

use std::env;
use std::process::exit;

use rede_core::{Algorithm, BenchmarkFunction, FunctionId, RunConfig};

fn main() {
    let args: Vec<String> = env::args().skip(1).collect();
    if args.len() < 4 {
        eprintln!("usage: convergence <algorithm> <function> <first-seed> <count> [--trace]");
        exit(2);
    }
    let algorithm: Algorithm = args[0].parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        exit(2);
    });
    let function_id: FunctionId = args[1].parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        exit(2);
    });
    let first: u64 = args[2].parse().expect("first-seed must be an integer");
    let count: u64 = args[3].parse().expect("count must be an integer");
    let trace = args.iter().any(|a| a == "--trace");

    let function = BenchmarkFunction::new(function_id, 10).expect("10-dimensional suite");
    let mut finals = Vec::new();
    for seed in first..first + count {
        let config = RunConfig::paper_defaults(algorithm, function, seed);
        let result = rede_core::run(&config).unwrap_or_else(|e| {
            eprintln!("seed {seed}: {e}");
            exit(1);
        });
        if trace && seed == first {
            for (gen, best) in result.per_generation_best.iter().enumerate() {
                if gen % 100 == 0 {
                    println!("# gen {gen:4}  best {best:.6e}");
                }
            }
        }
        println!(
            "seed {seed:4}  best {:.6e}  evals {}  fallbacks {}",
            result.best_fitness, result.evaluations_used, result.regression_fallbacks
        );
        finals.push(result.best_fitness);
    }
    let mean = finals.iter().sum::<f64>() / finals.len() as f64;
    let worst = finals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("mean {mean:.6e}  worst {worst:.6e}  n {}", finals.len());
}
