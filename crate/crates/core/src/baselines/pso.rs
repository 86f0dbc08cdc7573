use alloc::format;
use alloc::vec::Vec;

use super::{BaselineConfig, BaselineKind};
use crate::budget::{EvalBudget, Evaluation, Evaluator, Objective};
use crate::domain::SearchDomain;
use crate::random::RandomSource;
use crate::trial::{Recorder, RunResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    /// `(low, high)`; the decreasing-inertia variants go from high to low.
    pub inertia: (f64, f64),
    pub cognitive: f64,
    pub social: f64,
    /// Per-axis velocity limit as a fraction of the axis width.
    pub speed_limit: f64,
    /// Neighbors consulted by the ring variant (split evenly on both sides).
    pub neighborhood: usize,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self { inertia: (0.7, 0.9), cognitive: 2.0, social: 2.0, speed_limit: 0.1 / 8.0, neighborhood: 2 }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.inertia;
        if !(lo <= hi && lo >= 0.0) {
            return Err(Error::Config(format!("inertia range [{lo}, {hi}] is invalid")));
        }
        if !(self.speed_limit > 0.0) {
            return Err(Error::Config("speed limit must be positive".into()));
        }
        if self.cognitive < 0.0 || self.social < 0.0 {
            return Err(Error::Config("acceleration coefficients must be nonnegative".into()));
        }
        if self.neighborhood == 0 {
            return Err(Error::Config("neighborhood size must be positive".into()));
        }
        Ok(())
    }
}

struct Particle {
    position: Vec<f64>,
    velocity: Vec<f64>,
    best_position: Vec<f64>,
    best_cost: f64,
}

/// Runs one of the swarm variants. `observer` sees every particle velocity
/// after each generation.
pub fn run<O, F>(
    config: &BaselineConfig,
    objective: &O,
    domain: &SearchDomain,
    budget: EvalBudget,
    rng: &mut RandomSource,
    mut observer: F,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    F: FnMut(&[&[f64]]),
{
    let params = &config.pso;
    let seed = rng.seed();
    let d = domain.dimension();
    let vmax: Vec<f64> = (0..d).map(|i| params.speed_limit * domain.width(i)).collect();
    let mut eval = Evaluator::new(objective, budget);
    let mut rec = Recorder::default();

    let mut swarm: Vec<Particle> = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let position = domain.sample_uniform(rng);
        let velocity: Vec<f64> = vmax.iter().map(|&v| rng.uniform(-v, v)).collect();
        let best_cost = match eval.evaluate(&position) {
            Some(Evaluation::Finite(c)) => {
                rec.offer(&position, c);
                c
            }
            _ => f64::INFINITY,
        };
        swarm.push(Particle { best_position: position.clone(), position, velocity, best_cost });
    }
    rec.snapshot(0, eval.used(), eval.discarded());

    let n = swarm.len();
    let half = (params.neighborhood / 2).max(1);
    let (w_lo, w_hi) = params.inertia;
    let mut generation = 0u64;
    while !eval.is_exhausted() {
        generation += 1;
        for i in 0..n {
            if eval.is_exhausted() {
                break;
            }
            let progress = eval.used() as f64 / eval.budget().limit() as f64;
            let inertia = match config.kind {
                BaselineKind::Pso => rng.uniform(w_lo, w_hi),
                _ => w_hi - (w_hi - w_lo) * progress,
            };
            let guide = match config.kind {
                BaselineKind::PsoWLocal => {
                    let mut best = i;
                    for off in 1..=half {
                        for j in [(i + n - off % n) % n, (i + off) % n] {
                            if swarm[j].best_cost < swarm[best].best_cost {
                                best = j;
                            }
                        }
                    }
                    swarm[best].best_position.clone()
                }
                _ => global_best(&swarm).to_vec(),
            };
            let p = &mut swarm[i];
            for k in 0..d {
                let r1 = rng.unit();
                let r2 = rng.unit();
                let v = inertia * p.velocity[k]
                    + params.cognitive * r1 * (p.best_position[k] - p.position[k])
                    + params.social * r2 * (guide[k] - p.position[k]);
                p.velocity[k] = v.clamp(-vmax[k], vmax[k]);
                p.position[k] += p.velocity[k];
            }
            p.position = domain.clamp(&p.position);
            if let Some(Evaluation::Finite(c)) = eval.evaluate(&p.position) {
                rec.offer(&p.position, c);
                if c < p.best_cost {
                    p.best_cost = c;
                    p.best_position.clone_from(&p.position);
                }
            }
        }
        let velocities: Vec<&[f64]> = swarm.iter().map(|p| p.velocity.as_slice()).collect();
        observer(&velocities);
        rec.snapshot(generation, eval.used(), eval.discarded());
    }
    Ok(rec.finish(config.kind.tag(), seed, eval.used(), eval.discarded()))
}

fn global_best(swarm: &[Particle]) -> &[f64] {
    let best = swarm
        .iter()
        .reduce(|a, b| if b.best_cost < a.best_cost { b } else { a })
        .expect("nonempty swarm");
    &best.best_position
}
