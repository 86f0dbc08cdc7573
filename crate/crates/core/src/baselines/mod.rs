//! Reference optimizers for head-to-head comparison: three particle-swarm
//! variants, a genetic algorithm and simulated annealing.
//!
//! They share the [`EvalBudget`](crate::EvalBudget) accounting and the
//! [`RunResult`](crate::RunResult) shape with the main optimizer.

pub mod ga;
pub mod pso;
pub mod sa;

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::budget::{EvalBudget, Objective};
use crate::domain::SearchDomain;
use crate::random::RandomSource;
use crate::trial::RunResult;
use crate::{Error, Result};

pub use ga::GaParams;
pub use pso::PsoParams;
pub use sa::SaParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    /// Global-best swarm, inertia drawn uniformly from the inertia range.
    Pso,
    /// Global-best swarm, inertia decreasing linearly over the run.
    PsoW,
    /// Ring-neighborhood swarm with linearly decreasing inertia.
    PsoWLocal,
    Ga,
    Sa,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 5] =
        [BaselineKind::Ga, BaselineKind::Sa, BaselineKind::Pso, BaselineKind::PsoW, BaselineKind::PsoWLocal];

    pub fn tag(self) -> &'static str {
        match self {
            BaselineKind::Pso => "PSO",
            BaselineKind::PsoW => "PSO-W",
            BaselineKind::PsoWLocal => "PSO-w-local",
            BaselineKind::Ga => "GA",
            BaselineKind::Sa => "SA",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown baseline optimizer '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    pub kind: BaselineKind,
    pub population: usize,
    pub pso: PsoParams,
    pub ga: GaParams,
    pub sa: SaParams,
}

impl BaselineConfig {
    pub fn new(kind: BaselineKind) -> Self {
        Self {
            kind,
            population: 50,
            pso: PsoParams::default(),
            ga: GaParams::default(),
            sa: SaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::Config("baseline population must be positive".into()));
        }
        match self.kind {
            BaselineKind::Pso | BaselineKind::PsoW | BaselineKind::PsoWLocal => self.pso.validate(),
            BaselineKind::Ga => self.ga.validate(),
            BaselineKind::Sa => self.sa.validate(),
        }
    }
}

pub fn run_baseline<O: Objective + ?Sized>(
    config: &BaselineConfig,
    objective: &O,
    domain: &SearchDomain,
    budget: EvalBudget,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    config.validate()?;
    if budget.limit() < config.population as u64 {
        return Err(Error::InvalidInput(format!(
            "budget {} is smaller than the population {}",
            budget.limit(),
            config.population
        )));
    }
    match config.kind {
        BaselineKind::Pso | BaselineKind::PsoW | BaselineKind::PsoWLocal => {
            pso::run(config, objective, domain, budget, rng, |_| {})
        }
        BaselineKind::Ga => ga::run(config, objective, domain, budget, rng),
        BaselineKind::Sa => sa::run(config, objective, domain, budget, rng).map(|(r, _)| r),
    }
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn cube() -> SearchDomain {
        SearchDomain::cube(3, -5.0, 5.0).unwrap()
    }

    #[test]
    fn tags_round_trip() {
        for k in BaselineKind::ALL {
            assert_eq!(k.tag().parse::<BaselineKind>().unwrap(), k);
        }
        assert!("pso-x".parse::<BaselineKind>().is_err());
        assert_eq!(BaselineKind::PsoWLocal.to_string(), "PSO-w-local");
    }

    #[test]
    fn budget_equal_to_population_is_initial_sample() {
        for k in BaselineKind::ALL {
            let cfg = BaselineConfig::new(k);
            let r = run_baseline(&cfg, &sphere, &cube(), EvalBudget::new(50).unwrap(), &mut RandomSource::new(3))
                .unwrap();
            assert_eq!(r.evaluations_used, 50, "{k}");
            let mut rng = RandomSource::new(3);
            let first = (0..50).map(|_| sphere(&cube().sample_uniform(&mut rng))).fold(f64::INFINITY, f64::min);
            assert_eq!(r.best_cost(), first, "{k}");
        }
    }

    #[test]
    fn budget_below_population() {
        let cfg = BaselineConfig::new(BaselineKind::Ga);
        assert!(run_baseline(&cfg, &sphere, &cube(), EvalBudget::new(49).unwrap(), &mut RandomSource::new(0)).is_err());
    }

    #[test]
    fn spend_budget_and_trace_monotone() {
        for k in BaselineKind::ALL {
            let cfg = BaselineConfig::new(k);
            let r = run_baseline(&cfg, &sphere, &cube(), EvalBudget::new(3_001).unwrap(), &mut RandomSource::new(8))
                .unwrap();
            assert_eq!(r.evaluations_used, 3_001, "{k}");
            assert_eq!(r.optimizer, k.tag());
            assert!(r.trace.windows(2).all(|w| w[1].best_cost <= w[0].best_cost), "{k}");
            assert!(cube().contains(&r.best.as_ref().unwrap().position));
            assert!(r.best_cost() < r.trace[0].best_cost, "{k}");
        }
    }

    #[test]
    fn deterministic() {
        for k in BaselineKind::ALL {
            let cfg = BaselineConfig::new(k);
            let run = |s| run_baseline(&cfg, &sphere, &cube(), EvalBudget::new(1_000).unwrap(), &mut RandomSource::new(s)).unwrap();
            assert_eq!(run(5), run(5), "{k}");
            assert_ne!(run(5).best_cost(), run(6).best_cost(), "{k}");
        }
    }

    #[test]
    fn velocities_respect_limit() {
        let dom = SearchDomain::new(alloc::vec![-1.0, 0.0, -100.0], alloc::vec![1.0, 10.0, 100.0]).unwrap();
        for k in [BaselineKind::Pso, BaselineKind::PsoW, BaselineKind::PsoWLocal] {
            let cfg = BaselineConfig::new(k);
            let mut worst = 0.0f64;
            pso::run(&cfg, &sphere, &dom, EvalBudget::new(5_000).unwrap(), &mut RandomSource::new(1), |vs| {
                for v in vs {
                    for (i, c) in v.iter().enumerate() {
                        worst = worst.max(c.abs() / dom.width(i));
                    }
                }
            })
            .unwrap();
            assert!(worst <= 0.1 / 8.0 + 1e-15, "{k} {worst}");
            assert!(worst > 0.0);
        }
    }

    #[test]
    fn sa_accepts_every_move_on_flat_landscape() {
        let cfg = BaselineConfig::new(BaselineKind::Sa);
        let (r, stats) = sa::run(&cfg, &|_: &[f64]| 1.0, &cube(), EvalBudget::new(2_000).unwrap(), &mut RandomSource::new(0))
            .unwrap();
        assert_eq!(stats.proposed, 1_950);
        assert_eq!(stats.accepted, stats.proposed);
        assert_eq!(r.best_cost(), 1.0);
    }

    #[test]
    fn sa_schedule_shape() {
        let s = SaParams::default().schedule();
        assert_eq!(s.len(), 13);
        assert_eq!(s[0], (1.0, 1));
        assert!((s[12].0 - 1e-4).abs() < 1e-18);
        assert_eq!(s[12].1, 4096);
        assert!(s.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 == 2 * w[0].1));
    }

    #[test]
    fn parameter_validation() {
        let mut c = BaselineConfig::new(BaselineKind::Ga);
        c.ga.mutation = 1.5;
        assert!(c.validate().is_err());
        let mut c = BaselineConfig::new(BaselineKind::Sa);
        c.sa.max_repeats = 100;
        assert!(c.validate().is_err());
        let mut c = BaselineConfig::new(BaselineKind::Pso);
        c.pso.inertia = (0.9, 0.7);
        assert!(c.validate().is_err());
        let mut c = BaselineConfig::new(BaselineKind::Pso);
        c.population = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ga_survives_nan_regions() {
        let f = |x: &[f64]| if x[0] > 1.0 { f64::NAN } else { sphere(x) };
        let cfg = BaselineConfig::new(BaselineKind::Ga);
        let r = run_baseline(&cfg, &f, &cube(), EvalBudget::new(2_000).unwrap(), &mut RandomSource::new(2)).unwrap();
        assert!(r.discarded > 0);
        assert_eq!(r.evaluations_used, 2_000);
    }
}
