use alloc::format;
use alloc::vec::Vec;

use super::BaselineConfig;
use crate::budget::{EvalBudget, Evaluation, Evaluator, Objective};
use crate::domain::SearchDomain;
use crate::random::RandomSource;
use crate::trial::{Recorder, RunResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    pub t_max: f64,
    pub t_min: f64,
    /// Repeats per temperature double from 1 up to this value.
    pub max_repeats: u64,
    /// Gaussian step scale at `t_max`, as a fraction of the axis width.
    pub step_scale: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self { t_max: 1.0, t_min: 1e-4, max_repeats: 4096, step_scale: 0.1 }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max) {
            return Err(Error::Config(format!(
                "need 0 < T_min < T_max, got T_min={} T_max={}",
                self.t_min, self.t_max
            )));
        }
        if self.max_repeats == 0 || !self.max_repeats.is_power_of_two() {
            return Err(Error::Config(format!(
                "repeats per state must end at a power of two, got {}",
                self.max_repeats
            )));
        }
        if !(self.step_scale > 0.0) {
            return Err(Error::Config("SA step scale must be positive".into()));
        }
        Ok(())
    }

    /// `(temperature, repeats)` for each state of the schedule; the last
    /// state is held until the budget runs out.
    pub fn schedule(&self) -> Vec<(f64, u64)> {
        let levels = self.max_repeats.trailing_zeros();
        (0..=levels)
            .map(|k| {
                let frac = if levels == 0 { 1.0 } else { k as f64 / levels as f64 };
                let t = self.t_max * libm::pow(self.t_min / self.t_max, frac);
                (t, 1u64 << k)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SaStats {
    pub proposed: u64,
    pub accepted: u64,
}

/// Metropolis annealing from the best of `population` uniform samples, with
/// geometric cooling and Gaussian steps that shrink with temperature.
pub fn run<O: Objective + ?Sized>(
    config: &BaselineConfig,
    objective: &O,
    domain: &SearchDomain,
    budget: EvalBudget,
    rng: &mut RandomSource,
) -> Result<(RunResult, SaStats)> {
    let params = &config.sa;
    let seed = rng.seed();
    let d = domain.dimension();
    let mut eval = Evaluator::new(objective, budget);
    let mut rec = Recorder::default();
    let mut stats = SaStats::default();

    let mut current: Option<(Vec<f64>, f64)> = None;
    for _ in 0..config.population {
        let x = domain.sample_uniform(rng);
        if let Some(Evaluation::Finite(c)) = eval.evaluate(&x) {
            rec.offer(&x, c);
            if current.as_ref().map_or(true, |(_, cc)| c < *cc) {
                current = Some((x, c));
            }
        }
    }
    rec.snapshot(0, eval.used(), eval.discarded());

    let schedule = params.schedule();
    let mut state = 0usize;
    let mut step = 0u64;
    while !eval.is_exhausted() {
        let (temperature, repeats) = schedule[state.min(schedule.len() - 1)];
        let sigma = params.step_scale * libm::sqrt(temperature / params.t_max);
        for _ in 0..repeats {
            let Some((x, cost)) = current.as_mut() else {
                // Nothing finite yet: keep sampling uniformly.
                let y = domain.sample_uniform(rng);
                match eval.evaluate(&y) {
                    None => break,
                    Some(Evaluation::Finite(c)) => {
                        rec.offer(&y, c);
                        current = Some((y, c));
                    }
                    Some(Evaluation::Discarded) => {}
                }
                continue;
            };
            let candidate: Vec<f64> =
                (0..d).map(|k| x[k] + sigma * domain.width(k) * rng.normal()).collect();
            let candidate = domain.clamp(&candidate);
            let Some(outcome) = eval.evaluate(&candidate) else { break };
            stats.proposed += 1;
            let u = rng.unit();
            if let Evaluation::Finite(c) = outcome {
                rec.offer(&candidate, c);
                let delta = c - *cost;
                if delta <= 0.0 || u < libm::exp(-delta / temperature) {
                    stats.accepted += 1;
                    *x = candidate;
                    *cost = c;
                }
            }
        }
        state += 1;
        step += 1;
        rec.snapshot(step, eval.used(), eval.discarded());
    }
    Ok((rec.finish(config.kind.tag(), seed, eval.used(), eval.discarded()), stats))
}
