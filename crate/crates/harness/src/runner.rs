//! Plan execution: runs every task, streams records to the CSV writer in
//! plan order, and isolates per-run failures.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::format::sci;
use crate::plan::{ExperimentPlan, RunTask};

pub const RUNS_HEADER: &str =
    "algorithm,function,dimension,run,seed,best_fitness,evaluations,wall_time_ms";

/// One completed run, as persisted to `runs.csv`.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub algorithm: String,
    pub function: &'static str,
    pub dimension: usize,
    pub run_index: usize,
    pub seed: u64,
    pub best_fitness: f64,
    pub evaluations: u64,
    pub wall_time_ms: u64,
}

impl RunRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.function,
            self.dimension,
            self.run_index,
            self.seed,
            sci(self.best_fitness),
            self.evaluations,
            self.wall_time_ms,
        )
    }
}

/// A run that errored; the rest of the plan still executes.
#[derive(Clone, Debug)]
pub struct RunFailure {
    pub algorithm: String,
    pub function: &'static str,
    pub run_index: usize,
    pub seed: u64,
    pub message: String,
}

/// Everything `execute_plan` produced: completed records in plan order
/// plus any isolated failures.
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

fn run_task(task: &RunTask) -> std::result::Result<RunRecord, String> {
    let started = Instant::now();
    let result = rede_core::run(&task.config).map_err(|e| e.to_string())?;
    if !result.best_fitness.is_finite() {
        return Err(format!("non-finite best fitness {}", result.best_fitness));
    }
    Ok(RunRecord {
        algorithm: task.algorithm_token.clone(),
        function: task.function_token,
        dimension: task.config.params.dimension_d,
        run_index: task.run_index,
        seed: task.config.seed,
        best_fitness: result.best_fitness,
        evaluations: result.evaluations_used,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Collects outcomes in task order, writing each record as soon as every
/// earlier task has been accounted for. Completion events may arrive in
/// any order; the emitted file is still deterministic.
struct GatedSink<'a> {
    tasks: &'a [RunTask],
    writer: &'a mut dyn Write,
    progress: bool,
    runs_per_cell: usize,
    next: usize,
    pending: BTreeMap<usize, std::result::Result<RunRecord, String>>,
    records: Vec<RunRecord>,
    failures: Vec<RunFailure>,
}

impl<'a> GatedSink<'a> {
    fn new(
        tasks: &'a [RunTask],
        writer: &'a mut dyn Write,
        progress: bool,
        runs_per_cell: usize,
    ) -> Self {
        GatedSink {
            tasks,
            writer,
            progress,
            runs_per_cell,
            next: 0,
            pending: BTreeMap::new(),
            records: Vec::with_capacity(tasks.len()),
            failures: Vec::new(),
        }
    }

    fn accept(
        &mut self,
        index: usize,
        outcome: std::result::Result<RunRecord, String>,
    ) -> Result<()> {
        self.pending.insert(index, outcome);
        while let Some(outcome) = self.pending.remove(&self.next) {
            let task = &self.tasks[self.next];
            match outcome {
                Ok(record) => {
                    writeln!(self.writer, "{}", record.csv_row())
                        .map_err(|e| Error::io("runs.csv", e))?;
                    self.records.push(record);
                }
                Err(message) => {
                    let failure = RunFailure {
                        algorithm: task.algorithm_token.clone(),
                        function: task.function_token,
                        run_index: task.run_index,
                        seed: task.config.seed,
                        message,
                    };
                    eprintln!(
                        "warning: run failed: algorithm={} function={} run={} seed={}: {}",
                        failure.algorithm,
                        failure.function,
                        failure.run_index,
                        failure.seed,
                        failure.message,
                    );
                    self.failures.push(failure);
                }
            }
            self.next += 1;
            if self.progress && self.next % self.runs_per_cell == 0 {
                let done_cell = &self.tasks[self.next - 1];
                let total_cells = self.tasks.len() / self.runs_per_cell;
                eprintln!(
                    "[{}/{}] {}/{} finished",
                    self.next / self.runs_per_cell,
                    total_cells,
                    done_cell.algorithm_token,
                    done_cell.function_token,
                );
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<ExperimentOutcome> {
        debug_assert_eq!(self.next, self.tasks.len());
        self.writer.flush().map_err(|e| Error::io("runs.csv", e))?;
        Ok(ExperimentOutcome {
            records: self.records,
            failures: self.failures,
        })
    }
}

#[cfg(feature = "parallel")]
fn drive_tasks(tasks: &[RunTask], jobs: usize, sink: &mut GatedSink<'_>) -> Result<()> {
    if jobs == 1 {
        for task in tasks {
            sink.accept(task.index, run_task(task))?;
        }
        return Ok(());
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::invalid("jobs", e.to_string()))?;
    let mut sink_error = Ok(());
    std::thread::scope(|scope| {
        let (tx, rx) = std::sync::mpsc::channel();
        let worker = scope.spawn(move || {
            pool.install(|| {
                tasks.par_iter().for_each_with(tx, |tx, task| {
                    let _ = tx.send((task.index, run_task(task)));
                });
            });
        });
        for (index, outcome) in rx {
            if let Err(e) = sink.accept(index, outcome) {
                sink_error = Err(e);
                break;
            }
        }
        worker.join().expect("worker thread panicked");
    });
    sink_error
}

#[cfg(not(feature = "parallel"))]
fn drive_tasks(tasks: &[RunTask], jobs: usize, sink: &mut GatedSink<'_>) -> Result<()> {
    if jobs > 1 {
        eprintln!("note: built without the `parallel` feature; running sequentially");
    }
    for task in tasks {
        sink.accept(task.index, run_task(task))?;
    }
    Ok(())
}

/// Runs the whole plan, streaming `runs.csv` rows (header included) to
/// `writer` as runs complete. Records come back in plan order regardless
/// of scheduling; failures are reported on stderr and returned.
pub fn execute_plan(
    plan: &ExperimentPlan,
    writer: &mut dyn Write,
    progress: bool,
) -> Result<ExperimentOutcome> {
    let tasks = plan.tasks()?;
    writeln!(writer, "{RUNS_HEADER}").map_err(|e| Error::io("runs.csv", e))?;
    let mut sink = GatedSink::new(&tasks, writer, progress, plan.repetitions);
    drive_tasks(&tasks, plan.jobs, &mut sink)?;
    sink.finish()
}

/// Reruns one recorded run from its seed alone and reports the result
/// with round-trip float precision.
pub fn replay(task: &RunTask) -> Result<String> {
    let result = rede_core::run(&task.config)?;
    Ok(format!(
        "algorithm={}\nfunction={}\ndimension={}\nseed={}\nevaluations={}\nbest_fitness={:e}\n",
        task.algorithm_token,
        task.function_token,
        task.config.params.dimension_d,
        task.config.seed,
        result.evaluations_used,
        result.best_fitness,
    ))
}
