use alloc::format;
use alloc::vec::Vec;

use super::{check_unit, BaselineConfig};
use crate::budget::{EvalBudget, Evaluation, Evaluator, Objective};
use crate::domain::SearchDomain;
use crate::population::{Individual, Population};
use crate::random::RandomSource;
use crate::trial::{Recorder, RunResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    /// Per-gene probability of a uniform reset.
    pub mutation: f64,
    pub crossover: f64,
    /// Share of the population replaced by offspring each generation.
    pub replacement: f64,
    pub tournament: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self { mutation: 0.01, crossover: 0.8, replacement: 0.5, tournament: 2 }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        check_unit("mutation rate", self.mutation)?;
        check_unit("crossover rate", self.crossover)?;
        check_unit("replacement fraction", self.replacement)?;
        if self.replacement == 0.0 {
            return Err(Error::Config("replacement fraction must be positive".into()));
        }
        if self.tournament == 0 {
            return Err(Error::Config(format!("tournament size must be positive, got {}", self.tournament)));
        }
        Ok(())
    }
}

fn tournament<'a>(pop: &'a [Individual], size: usize, rng: &mut RandomSource) -> &'a Individual {
    let mut best = &pop[rng.index(pop.len())];
    for _ in 1..size {
        let c = &pop[rng.index(pop.len())];
        if c.cost < best.cost {
            best = c;
        }
    }
    best
}

/// Tournament selection, arithmetic crossover, uniform-reset mutation and
/// partial generational replacement of the worst members.
pub fn run<O: Objective + ?Sized>(
    config: &BaselineConfig,
    objective: &O,
    domain: &SearchDomain,
    budget: EvalBudget,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    let params = &config.ga;
    let seed = rng.seed();
    let size = config.population;
    let mut eval = Evaluator::new(objective, budget);
    let mut rec = Recorder::default();
    let mut pop = Population::new(size)?;

    for _ in 0..size {
        let x = domain.sample_uniform(rng);
        if let Some(Evaluation::Finite(c)) = eval.evaluate(&x) {
            rec.offer(&x, c);
            pop.push(Individual::new(x, c));
        }
    }
    pop.trim();
    rec.snapshot(0, eval.used(), eval.discarded());

    let offspring_count = (libm::ceil(params.replacement * size as f64) as usize).clamp(1, size);
    let mut generation = 0u64;
    while !eval.is_exhausted() {
        generation += 1;
        let mut offspring = Vec::with_capacity(offspring_count);
        for _ in 0..offspring_count {
            let child = if pop.is_empty() {
                domain.sample_uniform(rng)
            } else {
                let a = tournament(pop.members(), params.tournament, rng);
                let b = tournament(pop.members(), params.tournament, rng);
                let mut child = if rng.unit() < params.crossover {
                    let alpha = rng.unit_closed();
                    a.position.iter().zip(&b.position).map(|(x, y)| alpha * x + (1.0 - alpha) * y).collect()
                } else {
                    a.position.clone()
                };
                for (k, gene) in child.iter_mut().enumerate() {
                    if rng.unit() < params.mutation {
                        *gene = rng.uniform(domain.lower()[k], domain.upper()[k]);
                    }
                }
                child
            };
            match eval.evaluate(&child) {
                None => break,
                Some(Evaluation::Discarded) => {}
                Some(Evaluation::Finite(c)) => {
                    rec.offer(&child, c);
                    offspring.push(Individual::new(child, c));
                }
            }
        }
        // Offspring displace the worst members; the rest survive.
        let survivors = size.saturating_sub(offspring.len());
        let mut next: Vec<Individual> = pop.members()[..survivors.min(pop.len())].to_vec();
        next.extend(offspring);
        pop = Population::with_members(size, next)?;
        pop.trim();
        rec.snapshot(generation, eval.used(), eval.discarded());
    }
    Ok(rec.finish(config.kind.tag(), seed, eval.used(), eval.discarded()))
}
