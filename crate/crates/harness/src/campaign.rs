//! Campaign execution: every (cell, seed) pair is an independent job run by
//! a bounded pool of worker threads. Finished jobs travel over a channel to
//! the calling thread, which is the only writer of the output files.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use upbo_core::baselines::run_baseline;
use upbo_core::benchmarks::{Benchmark, FunctionId};
use upbo_core::stats::TrialResult;
use upbo_core::{upbo, EvalBudget, RandomSource, RunResult};

use crate::config::{Cell, ExperimentPlan, OptimizerSpec};
use crate::error::Result;
use crate::landscape::benchmark_for;
use crate::report;
use crate::results::{ResultRow, ResultStore, TrialKey};

pub const LANDSCAPES_DIR: &str = "landscapes";

/// Runs one trial. Swappable so tests can inject failures.
pub type TrialRunner<'r> = dyn Fn(&Cell, &Benchmark, u64) -> upbo_core::Result<RunResult> + Sync + 'r;

pub fn run_trial(cell: &Cell, benchmark: &Benchmark, seed: u64) -> upbo_core::Result<RunResult> {
    let budget = EvalBudget::new(cell.nfe)?;
    let mut rng = RandomSource::new(seed);
    match &cell.optimizer {
        OptimizerSpec::Upbo(c) => upbo::run(benchmark, benchmark.domain(), c, budget, &mut rng),
        OptimizerSpec::Baseline(b) => run_baseline(b, benchmark, benchmark.domain(), budget, &mut rng),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignSummary {
    pub executed: usize,
    pub skipped: usize,
    pub failed: usize,
}

struct Job<'a> {
    cell: &'a Cell,
    benchmark: &'a Benchmark,
    key: TrialKey,
}

enum Outcome {
    Done(ResultRow, Vec<upbo_core::TraceEntry>),
    Failed(String),
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic".to_string()
    }
}

fn execute(job: &Job<'_>, runner: &TrialRunner<'_>) -> Outcome {
    let result = catch_unwind(AssertUnwindSafe(|| runner(job.cell, job.benchmark, job.key.seed)));
    match result {
        Ok(Ok(run)) => {
            let trial = TrialResult::from_run(&run, job.benchmark, job.cell.nfe);
            let row = ResultRow {
                key: job.key.clone(),
                final_error: trial.final_error,
                evaluations_used: run.evaluations_used,
                best_cost: run.best_cost(),
            };
            Outcome::Done(row, run.trace)
        }
        Ok(Err(e)) => Outcome::Failed(e.to_string()),
        Err(payload) => Outcome::Failed(panic_message(payload.as_ref())),
    }
}

pub fn run_campaign(plan: &ExperimentPlan) -> Result<CampaignSummary> {
    run_campaign_with(plan, &run_trial)
}

pub fn run_campaign_with(plan: &ExperimentPlan, runner: &TrialRunner<'_>) -> Result<CampaignSummary> {
    let mut store = ResultStore::open(&plan.output_dir)?;

    let landscape_dir = plan.output_dir.join(LANDSCAPES_DIR);
    let mut benchmarks: BTreeMap<(FunctionId, usize), Benchmark> = BTreeMap::new();
    for cell in &plan.cells {
        if let std::collections::btree_map::Entry::Vacant(slot) = benchmarks.entry((cell.function, cell.dimension)) {
            slot.insert(benchmark_for(&landscape_dir, cell.function, cell.dimension, plan.landscape_seed)?);
        }
    }

    let mut summary = CampaignSummary::default();
    let mut jobs = Vec::new();
    for cell in &plan.cells {
        let fingerprint = cell.optimizer.fingerprint();
        for seed in plan.seeds() {
            let key = TrialKey {
                optimizer: cell.optimizer.name().to_string(),
                fingerprint: fingerprint.clone(),
                function: cell.function,
                dimension: cell.dimension,
                nfe: cell.nfe,
                seed,
            };
            if store.is_complete(&key) {
                summary.skipped += 1;
            } else {
                jobs.push(Job { cell, benchmark: &benchmarks[&(cell.function, cell.dimension)], key });
            }
        }
    }

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let workers = plan.parallelism.min(jobs.len()).max(1);
    let mut write_error = None;
    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, Outcome)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (jobs, next, stop) = (&jobs, &next, &stop);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                if tx.send((i, execute(job, runner))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, outcome) in rx {
            if write_error.is_some() {
                continue;
            }
            let key = &jobs[i].key;
            let written = match outcome {
                Outcome::Done(row, trace) => {
                    summary.executed += 1;
                    store.append(&row).and_then(|_| if plan.trace { store.write_trace(key, &trace) } else { Ok(()) })
                }
                Outcome::Failed(message) => {
                    summary.failed += 1;
                    store.append_failure(key, &message)
                }
            };
            if let Err(e) = written {
                stop.store(true, Ordering::Relaxed);
                write_error = Some(e);
            }
        }
    });
    if let Some(e) = write_error {
        return Err(e);
    }
    drop(store);
    report::write_reports(&plan.output_dir, false)?;
    Ok(summary)
}
