//! Rules that propose a new position inside a selected hull.
//!
//! All positions here are normalized unit-cube coordinates, both for the
//! hull members handed in and for the proposal returned.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::certainty::{select_elites, EliteRule};
use crate::hulls::{sample_in_hull, Hull};
use crate::population::Individual;
use crate::random::RandomSource;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum UpdateMethodKind {
    #[default]
    EitherRandomlyOrThroughBest,
    MoveThroughBest,
    Select2SolsChooseOneBetween,
    ClusterMean,
    MeanOfElites,
    GetWeightedMeanOfSols,
    GetWeightedMeanOfElites,
}

impl UpdateMethodKind {
    pub const ALL: [UpdateMethodKind; 7] = [
        Self::EitherRandomlyOrThroughBest,
        Self::MoveThroughBest,
        Self::Select2SolsChooseOneBetween,
        Self::ClusterMean,
        Self::MeanOfElites,
        Self::GetWeightedMeanOfSols,
        Self::GetWeightedMeanOfElites,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::EitherRandomlyOrThroughBest => "EitherRandomlyOrThroughBest",
            Self::MoveThroughBest => "MoveThroughBest",
            Self::Select2SolsChooseOneBetween => "Select2SolsChooseOneBetween",
            Self::ClusterMean => "ClusterMean",
            Self::MeanOfElites => "MeanOfElites",
            Self::GetWeightedMeanOfSols => "GetWeightedMeanOfSols",
            Self::GetWeightedMeanOfElites => "GetWeightedMeanOfElites",
        }
    }

    /// Members needed before the rule can run; below this it samples the hull.
    fn min_members(self) -> usize {
        match self {
            Self::Select2SolsChooseOneBetween => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for UpdateMethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for UpdateMethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Select2Sols&ChooseOneBetween" {
            return Ok(Self::Select2SolsChooseOneBetween);
        }
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown update method '{s}'")))
    }
}

/// Probability of the random branch of `EitherRandomlyOrThroughBest`,
/// possibly varying with run progress in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbabilitySchedule {
    Constant(f64),
    Linear { start: f64, end: f64 },
}

impl Default for ProbabilitySchedule {
    fn default() -> Self {
        ProbabilitySchedule::Constant(0.5)
    }
}

impl ProbabilitySchedule {
    pub fn at(&self, progress: f64) -> f64 {
        match *self {
            ProbabilitySchedule::Constant(p) => p,
            ProbabilitySchedule::Linear { start, end } => {
                start + (end - start) * progress.clamp(0.0, 1.0)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |p: f64| p > 0.0 && p < 1.0;
        let valid = match *self {
            ProbabilitySchedule::Constant(p) => ok(p),
            ProbabilitySchedule::Linear { start, end } => ok(start) && ok(end),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::Config(format!("random-branch probability must lie in (0, 1): {self:?}")))
        }
    }
}

/// `start + u * (best - start)`.
pub fn move_through_best(start: &[f64], best: &[f64], u: f64) -> Vec<f64> {
    start.iter().zip(best).map(|(s, b)| s + u * (b - s)).collect()
}

/// `a * x1 + (1 - a) * x2`.
pub fn point_between(x1: &[f64], x2: &[f64], a: f64) -> Vec<f64> {
    x1.iter().zip(x2).map(|(p, q)| a * p + (1.0 - a) * q).collect()
}

pub fn mean_position(members: &[&Individual]) -> Vec<f64> {
    let d = members[0].position.len();
    let n = members.len() as f64;
    (0..d).map(|j| members.iter().map(|m| m.position[j]).sum::<f64>() / n).collect()
}

/// Fitness-weighted mean; equal weights when every fitness is zero.
pub fn weighted_mean_position(members: &[&Individual]) -> Vec<f64> {
    let total: f64 = members.iter().map(|m| m.fitness).sum();
    if !(total > 0.0) {
        return mean_position(members);
    }
    let d = members[0].position.len();
    (0..d)
        .map(|j| members.iter().map(|m| m.fitness * m.position[j]).sum::<f64>() / total)
        .collect()
}

fn best_member<'a>(members: &[&'a Individual]) -> &'a Individual {
    members
        .iter()
        .copied()
        .reduce(|best, m| if m.fitness > best.fitness { m } else { best })
        .expect("nonempty member set")
}

/// Proposes one normalized position in `hull`.
///
/// `p` is the probability of the random branch used by
/// `EitherRandomlyOrThroughBest`; other rules ignore it. Rules that lack the
/// members they need fall back to uniform sampling of the hull.
pub fn propose(
    kind: UpdateMethodKind,
    p: f64,
    hull: &Hull,
    members: &[&Individual],
    rule: &EliteRule,
    rng: &mut RandomSource,
) -> Result<Vec<f64>> {
    if members.len() < kind.min_members() {
        return sample_in_hull(hull, rng);
    }
    match kind {
        UpdateMethodKind::EitherRandomlyOrThroughBest => {
            if rng.unit() < p {
                sample_in_hull(hull, rng)
            } else {
                Ok(through_best(members, rng))
            }
        }
        UpdateMethodKind::MoveThroughBest => Ok(through_best(members, rng)),
        UpdateMethodKind::Select2SolsChooseOneBetween => {
            let i = rng.index(members.len());
            let mut j = rng.index(members.len() - 1);
            if j >= i {
                j += 1;
            }
            let a = rng.unit_closed();
            Ok(point_between(&members[i].position, &members[j].position, a))
        }
        UpdateMethodKind::ClusterMean => Ok(mean_position(members)),
        UpdateMethodKind::MeanOfElites => Ok(mean_position(&select_elites(members, rule))),
        UpdateMethodKind::GetWeightedMeanOfSols => Ok(weighted_mean_position(members)),
        UpdateMethodKind::GetWeightedMeanOfElites => {
            Ok(weighted_mean_position(&select_elites(members, rule)))
        }
    }
}

fn through_best(members: &[&Individual], rng: &mut RandomSource) -> Vec<f64> {
    let start = members[rng.index(members.len())];
    let best = best_member(members);
    let u = rng.unit_closed();
    move_through_best(&start.position, &best.position, u)
}
