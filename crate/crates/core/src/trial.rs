use alloc::string::String;
use alloc::vec::Vec;

use crate::population::Individual;

/// Best-so-far snapshot taken after the initial sample (iteration 0) and at
/// the end of every iteration or generation.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub iteration: u64,
    /// `f64::INFINITY` until a finite cost has been seen.
    pub best_cost: f64,
    pub evaluations: u64,
    /// Cumulative count of non-finite objective values thrown away.
    pub discarded: u64,
}

/// What a single optimizer run returns.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub optimizer: String,
    pub seed: u64,
    pub best: Option<Individual>,
    pub evaluations_used: u64,
    pub discarded: u64,
    pub trace: Vec<TraceEntry>,
}

impl RunResult {
    pub fn best_cost(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.cost)
    }
}

/// Running record of the best individual and the trace.
#[derive(Debug, Default)]
pub(crate) struct Recorder {
    pub best: Option<Individual>,
    pub trace: Vec<TraceEntry>,
}

impl Recorder {
    pub fn offer(&mut self, position: &[f64], cost: f64) {
        if self.best.as_ref().map_or(true, |b| cost < b.cost) {
            self.best = Some(Individual::new(position.to_vec(), cost));
        }
    }

    pub fn snapshot(&mut self, iteration: u64, evaluations: u64, discarded: u64) {
        let best_cost = self.best.as_ref().map_or(f64::INFINITY, |b| b.cost);
        self.trace.push(TraceEntry { iteration, best_cost, evaluations, discarded });
    }

    pub fn finish(self, optimizer: &str, seed: u64, evaluations_used: u64, discarded: u64) -> RunResult {
        RunResult {
            optimizer: optimizer.into(),
            seed,
            best: self.best,
            evaluations_used,
            discarded,
            trace: self.trace,
        }
    }
}
