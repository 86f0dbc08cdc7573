//! Certainty metrics: how promising a hull looks given the fitnesses of the
//! solutions it already holds.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::hulls::Hull;
use crate::population::Individual;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CertaintyMetricKind {
    SumFitnessPerVolume,
    SumEliteFitnessPerVolume,
    #[default]
    MeanFitnessPerVolume,
    BestFitnessPerVolume,
    VarFitnessPerVolume,
}

impl CertaintyMetricKind {
    pub const ALL: [CertaintyMetricKind; 5] = [
        CertaintyMetricKind::SumFitnessPerVolume,
        CertaintyMetricKind::SumEliteFitnessPerVolume,
        CertaintyMetricKind::MeanFitnessPerVolume,
        CertaintyMetricKind::BestFitnessPerVolume,
        CertaintyMetricKind::VarFitnessPerVolume,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::SumFitnessPerVolume => "SumFitnessPerVolume",
            Self::SumEliteFitnessPerVolume => "SumEliteFitnessPerVolume",
            Self::MeanFitnessPerVolume => "MeanFitnessPerVolume",
            Self::BestFitnessPerVolume => "BestFitnessPerVolume",
            Self::VarFitnessPerVolume => "VarFitnessPerVolume",
        }
    }
}

impl fmt::Display for CertaintyMetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CertaintyMetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown certainty metric '{s}'")))
    }
}

/// Which hull members count as elites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliteRule {
    /// Members with cost below `cost_thresh * mean cost` are elites.
    pub cost_thresh: f64,
    /// Share of members (by fitness) kept when the threshold selects nobody.
    pub fallback_fraction: f64,
}

impl Default for EliteRule {
    fn default() -> Self {
        Self { cost_thresh: 0.3, fallback_fraction: 0.3 }
    }
}

impl EliteRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.cost_thresh > 0.0 && self.cost_thresh < 1.0) {
            return Err(Error::Config(format!(
                "EliteCostsThresh must lie in (0, 1), got {}",
                self.cost_thresh
            )));
        }
        if !(self.fallback_fraction > 0.0 && self.fallback_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "elite fallback fraction must lie in (0, 1], got {}",
                self.fallback_fraction
            )));
        }
        Ok(())
    }
}

/// Elites of a hull's member set. Never empty for a nonempty input.
///
/// With a positive mean cost, the elites are members costing less than
/// `cost_thresh` times the mean. If that leaves nobody, or the mean is not
/// positive, the best `ceil(fallback_fraction * n)` members by fitness are
/// returned instead.
pub fn select_elites<'a>(members: &[&'a Individual], rule: &EliteRule) -> Vec<&'a Individual> {
    if members.is_empty() {
        return Vec::new();
    }
    let n = members.len();
    let mean = members.iter().map(|m| m.cost).sum::<f64>() / n as f64;
    if mean > 0.0 {
        let cutoff = rule.cost_thresh * mean;
        let elites: Vec<&Individual> = members.iter().copied().filter(|m| m.cost < cutoff).collect();
        if !elites.is_empty() {
            return elites;
        }
    }
    let keep = (libm::ceil(rule.fallback_fraction * n as f64) as usize).clamp(1, n);
    let mut ranked: Vec<&Individual> = members.to_vec();
    ranked.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    ranked.truncate(keep);
    ranked
}

/// Scores a hull from its members' fitnesses. Empty hulls score zero.
///
/// `MeanFitnessPerVolume` is the plain mean: averaging already removes the
/// effect of hull size, so it is not divided by the volume proxy.
pub fn certainty(
    kind: CertaintyMetricKind,
    members: &[&Individual],
    hull: &Hull,
    dimension: usize,
    rule: &EliteRule,
) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let volume = hull.volume_proxy(dimension);
    let n = members.len() as f64;
    let sum = |ms: &[&Individual]| ms.iter().map(|m| m.fitness).sum::<f64>();
    match kind {
        CertaintyMetricKind::SumFitnessPerVolume => sum(members) / volume,
        CertaintyMetricKind::SumEliteFitnessPerVolume => sum(&select_elites(members, rule)) / volume,
        CertaintyMetricKind::MeanFitnessPerVolume => sum(members) / n,
        CertaintyMetricKind::BestFitnessPerVolume => {
            members.iter().map(|m| m.fitness).fold(f64::NEG_INFINITY, f64::max) / volume
        }
        CertaintyMetricKind::VarFitnessPerVolume => {
            let mean = sum(members) / n;
            let var = members.iter().map(|m| (m.fitness - mean) * (m.fitness - mean)).sum::<f64>() / n;
            var / volume
        }
    }
}
