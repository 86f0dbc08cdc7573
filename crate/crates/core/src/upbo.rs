//! The main optimization loop.
//!
//! Per iteration: score random hulls by certainty, keep the most certain
//! non-empty ones, split the proposal budget across them in proportion to
//! certainty, evaluate the proposals, then merge and trim the population.

use alloc::format;
use alloc::vec::Vec;

use crate::budget::{EvalBudget, Evaluation, Evaluator, Objective};
use crate::certainty::{certainty, CertaintyMetricKind, EliteRule};
use crate::domain::SearchDomain;
use crate::hulls::{generate_hulls, members_of, validate_radius_range, Hull, HullKind};
use crate::population::{Individual, Population};
use crate::random::RandomSource;
use crate::trial::{Recorder, RunResult};
use crate::update::{propose, ProbabilitySchedule, UpdateMethodKind};
use crate::{Error, Result};

pub const OPTIMIZER_NAME: &str = "UPBO";

/// Extra hull draws attempted when every hull of an iteration is empty.
pub const HULL_REGENERATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct UpboConfig {
    pub max_iter: u64,
    pub hull_kind: HullKind,
    pub metric: CertaintyMetricKind,
    pub update: UpdateMethodKind,
    /// Random-branch probability for `EitherRandomlyOrThroughBest`.
    pub p: ProbabilitySchedule,
    pub num_hulls: usize,
    pub hulls_selected: usize,
    /// Proposals per iteration, split across the selected hulls.
    pub max_updates_per_iter: usize,
    /// Population capacity after trimming.
    pub solutions_cnt: usize,
    pub radius_min: f64,
    pub radius_max: f64,
    pub elite_rule: EliteRule,
    /// Size of the initial uniform sample.
    pub init_pop: usize,
}

impl Default for UpboConfig {
    fn default() -> Self {
        let num_hulls = 7;
        Self {
            max_iter: u64::MAX,
            hull_kind: HullKind::Sphere,
            metric: CertaintyMetricKind::MeanFitnessPerVolume,
            update: UpdateMethodKind::EitherRandomlyOrThroughBest,
            p: ProbabilitySchedule::default(),
            num_hulls,
            hulls_selected: num_hulls.div_ceil(2),
            max_updates_per_iter: 50,
            solutions_cnt: 400,
            radius_min: 0.2,
            radius_max: 0.7,
            elite_rule: EliteRule::default(),
            init_pop: 400,
        }
    }
}

impl UpboConfig {
    pub fn validate(&self) -> Result<()> {
        validate_radius_range(self.radius_min, self.radius_max)?;
        self.elite_rule.validate()?;
        self.p.validate()?;
        let positive = [
            ("max_iter", self.max_iter as usize),
            ("NumOfHulls", self.num_hulls),
            ("HullsSelected", self.hulls_selected),
            ("MaxUpdatesPerIter", self.max_updates_per_iter),
            ("SolutionsCnt", self.solutions_cnt),
            ("InitPop", self.init_pop),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.hulls_selected > self.num_hulls {
            return Err(Error::Config(format!(
                "HullsSelected ({}) exceeds NumOfHulls ({})",
                self.hulls_selected, self.num_hulls
            )));
        }
        Ok(())
    }
}

/// Proposal counts per selected hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocationPlan {
    /// `(position among the selected hulls, count)`.
    pub per_hull: Vec<(usize, usize)>,
    pub total: usize,
}

impl AllocationPlan {
    pub fn counts(&self) -> Vec<usize> {
        self.per_hull.iter().map(|&(_, c)| c).collect()
    }
}

/// Largest-remainder apportionment of `n_s` proposals in proportion to
/// `certainties`. Remainder ties go to the lower index; an all-zero
/// certainty vector is apportioned uniformly.
pub fn allocate(certainties: &[f64], n_s: usize) -> Result<AllocationPlan> {
    if certainties.is_empty() {
        return Err(Error::NothingSelected);
    }
    if let Some(c) = certainties.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(Error::InvalidInput(format!("certainty must be finite and nonnegative, got {c}")));
    }
    let total: f64 = certainties.iter().sum();
    let quotas: Vec<f64> = if total > 0.0 {
        certainties.iter().map(|c| n_s as f64 * c / total).collect()
    } else {
        alloc::vec![n_s as f64 / certainties.len() as f64; certainties.len()]
    };
    let mut counts: Vec<usize> = quotas.iter().map(|q| libm::floor(*q) as usize).collect();
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    // Stable sort keeps lower indices first among equal remainders.
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - libm::floor(quotas[a]);
        let rb = quotas[b] - libm::floor(quotas[b]);
        rb.total_cmp(&ra)
    });
    let mut assigned: usize = counts.iter().sum();
    while assigned > n_s {
        // Rounding pushed a floor past an integer; take back from the smallest remainders.
        let i = *order.iter().rev().find(|&&i| counts[i] > 0).expect("positive count");
        counts[i] -= 1;
        assigned -= 1;
    }
    for &i in order.iter().cycle().take(n_s - assigned) {
        counts[i] += 1;
    }
    Ok(AllocationPlan { per_hull: counts.into_iter().enumerate().collect(), total: n_s })
}

struct ScoredHull {
    hull: Hull,
    members: Vec<usize>,
    certainty: f64,
}

/// Scores one draw of hulls; returns the selected non-empty ones, best first.
fn select_hulls(
    config: &UpboConfig,
    normalized: &[Individual],
    dimension: usize,
    rng: &mut RandomSource,
) -> Result<Vec<ScoredHull>> {
    let positions: Vec<Vec<f64>> = normalized.iter().map(|m| m.position.clone()).collect();
    let hulls = generate_hulls(
        config.num_hulls,
        config.hull_kind,
        dimension,
        config.radius_min,
        config.radius_max,
        rng,
    )?;
    let mut scored: Vec<ScoredHull> = hulls
        .into_iter()
        .filter_map(|hull| {
            let members = members_of(&hull, &positions);
            if members.is_empty() {
                return None;
            }
            let refs: Vec<&Individual> = members.iter().map(|&i| &normalized[i]).collect();
            let c = certainty(config.metric, &refs, &hull, dimension, &config.elite_rule);
            Some(ScoredHull { hull, members, certainty: c })
        })
        .collect();
    scored.sort_by(|a, b| b.certainty.total_cmp(&a.certainty));
    scored.truncate(config.hulls_selected);
    Ok(scored)
}

/// Runs the optimizer until `max_iter` iterations or the budget is spent.
pub fn run<O: Objective + ?Sized>(
    objective: &O,
    domain: &SearchDomain,
    config: &UpboConfig,
    budget: EvalBudget,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    run_observed(objective, domain, config, budget, rng, |_| {})
}

/// [`run`] that also shows `observer` the trimmed population after the
/// initial sample and after every iteration.
pub fn run_observed<O, F>(
    objective: &O,
    domain: &SearchDomain,
    config: &UpboConfig,
    budget: EvalBudget,
    rng: &mut RandomSource,
    mut observer: F,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    F: FnMut(&Population),
{
    config.validate()?;
    if budget.limit() < config.init_pop as u64 {
        return Err(Error::InvalidInput(format!(
            "budget {} is smaller than the initial population {}",
            budget.limit(),
            config.init_pop
        )));
    }
    let seed = rng.seed();
    let dimension = domain.dimension();
    let mut eval = Evaluator::new(objective, budget);
    let mut rec = Recorder::default();
    let mut pop = Population::new(config.solutions_cnt)?;

    for _ in 0..config.init_pop {
        let x = domain.sample_uniform(rng);
        if let Some(Evaluation::Finite(c)) = eval.evaluate(&x) {
            rec.offer(&x, c);
            pop.push(Individual::new(x, c));
        }
    }
    pop.trim();
    observer(&pop);
    rec.snapshot(0, eval.used(), eval.discarded());

    let mut iteration = 0u64;
    while iteration < config.max_iter && !eval.is_exhausted() {
        iteration += 1;
        pop.refresh_fitness()?;
        let normalized: Vec<Individual> = pop
            .members()
            .iter()
            .map(|m| Individual { position: domain.normalize(&m.position), cost: m.cost, fitness: m.fitness })
            .collect();

        let mut selected = Vec::new();
        for _ in 0..=HULL_REGENERATIONS {
            selected = select_hulls(config, &normalized, dimension, rng)?;
            if !selected.is_empty() {
                break;
            }
        }

        let n_s = config.max_updates_per_iter;
        let mut proposals: Vec<Vec<f64>> = Vec::with_capacity(n_s);
        if selected.is_empty() {
            proposals.extend((0..n_s).map(|_| domain.sample_uniform(rng)));
        } else {
            let certainties: Vec<f64> = selected.iter().map(|s| s.certainty).collect();
            let plan = allocate(&certainties, n_s)?;
            let progress = eval.used() as f64 / eval.budget().limit() as f64;
            let p = config.p.at(progress);
            for (slot, count) in plan.per_hull {
                let chosen = &selected[slot];
                let refs: Vec<&Individual> = chosen.members.iter().map(|&i| &normalized[i]).collect();
                for _ in 0..count {
                    let unit = match propose(config.update, p, &chosen.hull, &refs, &config.elite_rule, rng) {
                        Ok(u) => u,
                        // Hull barely overlaps the cube: take an unconstrained
                        // hull point and let the domain clamp pull it in.
                        Err(Error::DegenerateHull { .. }) => chosen.hull.sample_unbounded(rng),
                        Err(e) => return Err(e),
                    };
                    proposals.push(domain.clamp(&domain.denormalize(&unit)));
                }
            }
        }

        for x in proposals {
            match eval.evaluate(&x) {
                None => break,
                Some(Evaluation::Discarded) => {}
                Some(Evaluation::Finite(c)) => {
                    rec.offer(&x, c);
                    pop.push(Individual::new(x, c));
                }
            }
        }
        pop.trim();
        observer(&pop);
        rec.snapshot(iteration, eval.used(), eval.discarded());
    }

    Ok(rec.finish(OPTIMIZER_NAME, seed, eval.used(), eval.discarded()))
}
