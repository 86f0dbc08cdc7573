//! Experiment plans.
//!
//! A plan is a TOML document with a `[campaign]` table listing optimizers,
//! functions and budgets, an optional `[upbo]` table and an optional
//! `[baselines]` table. Optimizer parameters use the published preference
//! names as keys (`NumOfHulls`, `SpheresRadiusMin`, ...).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};
use upbo_core::baselines::{BaselineConfig, BaselineKind};
use upbo_core::benchmarks::FunctionId;
use upbo_core::certainty::{CertaintyMetricKind, EliteRule};
use upbo_core::hulls::HullKind;
use upbo_core::update::{ProbabilitySchedule, UpdateMethodKind};
use upbo_core::upbo::{UpboConfig, OPTIMIZER_NAME};

use crate::error::{HarnessError, Result};

/// Budget used by the published comparison for each function.
pub fn published_nfe(id: FunctionId) -> u64 {
    use FunctionId::*;
    match id {
        F12 | F13 | F14 | F17 | F18 | F19 => 30_000,
        F1 | F2 | F7 | F8 | F15 | F16 | F20 => 180_000,
        F3 | F4 | F5 | F6 | F9 | F10 | F11 => 500_000,
    }
}

/// Default dimension for a budget: 3 at 30k, 10 at 180k, 30 at 500k.
pub fn dimension_for_nfe(nfe: u64) -> Option<usize> {
    match nfe {
        30_000 => Some(3),
        180_000 => Some(10),
        500_000 => Some(30),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OptimizerSpec {
    Upbo(UpboConfig),
    Baseline(BaselineConfig),
}

impl OptimizerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OptimizerSpec::Upbo(_) => OPTIMIZER_NAME,
            OptimizerSpec::Baseline(b) => b.kind.tag(),
        }
    }

    /// Sorted `key=value` lines describing every parameter that affects a run.
    pub fn canonical_text(&self) -> String {
        let mut kv = BTreeMap::new();
        kv.insert("optimizer", self.name().to_string());
        match self {
            OptimizerSpec::Upbo(c) => {
                kv.insert("MaxIter", c.max_iter.to_string());
                kv.insert("HullType", c.hull_kind.tag().to_string());
                kv.insert("CertaintyMetricType", c.metric.tag().to_string());
                kv.insert("UpdateClusterSolutionMethod", c.update.tag().to_string());
                kv.insert("EitherRandomlyP", format!("{:?}", c.p));
                kv.insert("NumOfHulls", c.num_hulls.to_string());
                kv.insert("HullsSelected", c.hulls_selected.to_string());
                kv.insert("MaxUpdatesPerIter", c.max_updates_per_iter.to_string());
                kv.insert("SolutionsCnt", c.solutions_cnt.to_string());
                kv.insert("SpheresRadiusMin", c.radius_min.to_string());
                kv.insert("SpheresRadiusMax", c.radius_max.to_string());
                kv.insert("EliteCostsThresh", c.elite_rule.cost_thresh.to_string());
                kv.insert("EliteFallbackFraction", c.elite_rule.fallback_fraction.to_string());
                kv.insert("InitPop", c.init_pop.to_string());
            }
            OptimizerSpec::Baseline(b) => {
                kv.insert("Population", b.population.to_string());
                match b.kind {
                    BaselineKind::Pso | BaselineKind::PsoW | BaselineKind::PsoWLocal => {
                        kv.insert("Inertia", format!("{:?}", b.pso.inertia));
                        kv.insert("Cognitive", b.pso.cognitive.to_string());
                        kv.insert("Social", b.pso.social.to_string());
                        kv.insert("SpeedLimit", b.pso.speed_limit.to_string());
                        if b.kind == BaselineKind::PsoWLocal {
                            kv.insert("Neighborhood", b.pso.neighborhood.to_string());
                        }
                    }
                    BaselineKind::Ga => {
                        kv.insert("Mutation", b.ga.mutation.to_string());
                        kv.insert("Crossover", b.ga.crossover.to_string());
                        kv.insert("Replacement", b.ga.replacement.to_string());
                        kv.insert("Tournament", b.ga.tournament.to_string());
                    }
                    BaselineKind::Sa => {
                        kv.insert("T_max", b.sa.t_max.to_string());
                        kv.insert("T_min", b.sa.t_min.to_string());
                        kv.insert("RepeatsPerStateMax", b.sa.max_repeats.to_string());
                        kv.insert("StepScale", b.sa.step_scale.to_string());
                    }
                }
            }
        }
        kv.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// First 16 hex digits of the SHA-256 of [`Self::canonical_text`].
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.canonical_text().as_bytes());
        hex::encode(&digest[..8])
    }
}

/// One (optimizer, function, dimension, budget) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub optimizer: OptimizerSpec,
    pub function: FunctionId,
    pub dimension: usize,
    pub nfe: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub cells: Vec<Cell>,
    pub trials: u64,
    pub base_seed: u64,
    pub landscape_seed: u64,
    pub output_dir: PathBuf,
    pub parallelism: usize,
    pub trace: bool,
}

impl ExperimentPlan {
    /// Seeds for trial indices `0..trials`.
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.trials).map(|i| self.base_seed.wrapping_add(i))
    }
}

/// Command-line overrides applied on top of a plan file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub nfe: Option<u64>,
    pub dimension: Option<usize>,
    pub parallelism: Option<usize>,
    pub trace: bool,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    campaign: CampaignSection,
    #[serde(default)]
    upbo: UpboSection,
    #[serde(default)]
    baselines: BaselineSection,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FunctionList {
    All(String),
    Ids(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum NfeList {
    Published(String),
    Values(Vec<u64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CampaignSection {
    optimizers: Vec<String>,
    functions: FunctionList,
    nfe: NfeList,
    dimension: Option<usize>,
    #[serde(default = "default_trials")]
    trials: u64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    landscape_seed: u64,
    #[serde(default = "default_parallelism")]
    parallelism: usize,
    #[serde(default)]
    trace: bool,
    out: Option<PathBuf>,
}

fn default_trials() -> u64 {
    50
}

fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct UpboSection {
    MaxIter: Option<u64>,
    NumOfHulls: Option<usize>,
    HullType: Option<String>,
    CertaintyMetricType: Option<String>,
    UpdateClusterSolutionMethod: Option<String>,
    SpheresRadiusMin: Option<f64>,
    SpheresRadiusMax: Option<f64>,
    EliteCostsThresh: Option<f64>,
    EliteFallbackFraction: Option<f64>,
    HullsSelected: Option<usize>,
    MaxUpdatesPerIter: Option<usize>,
    SolutionsCnt: Option<usize>,
    InitPop: Option<usize>,
    EitherRandomlyP: Option<f64>,
    /// `[start, end]` for a linear schedule; overrides `EitherRandomlyP`.
    EitherRandomlyPSchedule: Option<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct BaselineSection {
    Population: Option<usize>,
    Inertia: Option<[f64; 2]>,
    Cognitive: Option<f64>,
    Social: Option<f64>,
    SpeedLimit: Option<f64>,
    Neighborhood: Option<usize>,
    Mutation: Option<f64>,
    Crossover: Option<f64>,
    Replacement: Option<f64>,
    Tournament: Option<usize>,
    T_max: Option<f64>,
    T_min: Option<f64>,
    RepeatsPerStateMax: Option<u64>,
    StepScale: Option<f64>,
}

fn parse_tag<T: std::str::FromStr<Err = upbo_core::Error>>(value: &Option<String>) -> Result<Option<T>> {
    value.as_deref().map(|s| s.parse::<T>().map_err(|e| HarnessError::Config(e.to_string()))).transpose()
}

impl UpboSection {
    fn build(&self) -> Result<UpboConfig> {
        let mut c = UpboConfig::default();
        if let Some(v) = self.NumOfHulls {
            c.num_hulls = v;
            c.hulls_selected = v.div_ceil(2);
        }
        if let Some(v) = parse_tag::<HullKind>(&self.HullType)? {
            c.hull_kind = v;
        }
        if let Some(v) = parse_tag::<CertaintyMetricKind>(&self.CertaintyMetricType)? {
            c.metric = v;
        }
        if let Some(v) = parse_tag::<UpdateMethodKind>(&self.UpdateClusterSolutionMethod)? {
            c.update = v;
        }
        if let Some(p) = self.EitherRandomlyP {
            c.p = ProbabilitySchedule::Constant(p);
        }
        if let Some([start, end]) = self.EitherRandomlyPSchedule {
            c.p = ProbabilitySchedule::Linear { start, end };
        }
        c.max_iter = self.MaxIter.unwrap_or(c.max_iter);
        c.radius_min = self.SpheresRadiusMin.unwrap_or(c.radius_min);
        c.radius_max = self.SpheresRadiusMax.unwrap_or(c.radius_max);
        c.hulls_selected = self.HullsSelected.unwrap_or(c.hulls_selected);
        c.max_updates_per_iter = self.MaxUpdatesPerIter.unwrap_or(c.max_updates_per_iter);
        c.solutions_cnt = self.SolutionsCnt.unwrap_or(c.solutions_cnt);
        c.init_pop = self.InitPop.unwrap_or(c.init_pop);
        c.elite_rule = EliteRule {
            cost_thresh: self.EliteCostsThresh.unwrap_or(c.elite_rule.cost_thresh),
            fallback_fraction: self.EliteFallbackFraction.unwrap_or(c.elite_rule.fallback_fraction),
        };
        c.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(c)
    }
}

impl BaselineSection {
    fn build(&self, kind: BaselineKind) -> Result<BaselineConfig> {
        let mut c = BaselineConfig::new(kind);
        c.population = self.Population.unwrap_or(c.population);
        if let Some([lo, hi]) = self.Inertia {
            c.pso.inertia = (lo, hi);
        }
        c.pso.cognitive = self.Cognitive.unwrap_or(c.pso.cognitive);
        c.pso.social = self.Social.unwrap_or(c.pso.social);
        c.pso.speed_limit = self.SpeedLimit.unwrap_or(c.pso.speed_limit);
        c.pso.neighborhood = self.Neighborhood.unwrap_or(c.pso.neighborhood);
        c.ga.mutation = self.Mutation.unwrap_or(c.ga.mutation);
        c.ga.crossover = self.Crossover.unwrap_or(c.ga.crossover);
        c.ga.replacement = self.Replacement.unwrap_or(c.ga.replacement);
        c.ga.tournament = self.Tournament.unwrap_or(c.ga.tournament);
        c.sa.t_max = self.T_max.unwrap_or(c.sa.t_max);
        c.sa.t_min = self.T_min.unwrap_or(c.sa.t_min);
        c.sa.max_repeats = self.RepeatsPerStateMax.unwrap_or(c.sa.max_repeats);
        c.sa.step_scale = self.StepScale.unwrap_or(c.sa.step_scale);
        c.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(c)
    }
}

pub fn parse_optimizer(name: &str, upbo: &UpboConfig, baselines: &dyn Fn(BaselineKind) -> Result<BaselineConfig>) -> Result<OptimizerSpec> {
    if name.eq_ignore_ascii_case(OPTIMIZER_NAME) {
        return Ok(OptimizerSpec::Upbo(upbo.clone()));
    }
    let kind: BaselineKind = name.parse().map_err(|e: upbo_core::Error| HarnessError::Config(e.to_string()))?;
    Ok(OptimizerSpec::Baseline(baselines(kind)?))
}

pub fn parse_plan(text: &str, overrides: &Overrides) -> Result<ExperimentPlan> {
    let file: PlanFile = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    let camp = file.campaign;
    let upbo = file.upbo.build()?;
    let build_baseline = |k| file.baselines.build(k);

    if camp.optimizers.is_empty() {
        return Err(HarnessError::Config("campaign.optimizers is empty".into()));
    }
    let mut optimizers = Vec::new();
    for name in &camp.optimizers {
        let spec = parse_optimizer(name, &upbo, &build_baseline)?;
        if optimizers.iter().any(|o: &OptimizerSpec| o.name() == spec.name()) {
            return Err(HarnessError::Config(format!("optimizer {name} listed twice")));
        }
        optimizers.push(spec);
    }

    let functions: Vec<FunctionId> = match &camp.functions {
        FunctionList::All(s) if s.eq_ignore_ascii_case("all") => FunctionId::ALL.to_vec(),
        FunctionList::All(s) => {
            return Err(HarnessError::Config(format!("campaign.functions must be a list or \"all\", got \"{s}\"")))
        }
        FunctionList::Ids(ids) => ids
            .iter()
            .map(|s| s.parse().map_err(|e: upbo_core::Error| HarnessError::Config(e.to_string())))
            .collect::<Result<_>>()?,
    };
    if functions.is_empty() {
        return Err(HarnessError::Config("campaign.functions is empty".into()));
    }

    let dimension = overrides.dimension.or(camp.dimension);
    let budgets = |f: FunctionId| -> Result<Vec<u64>> {
        if let Some(n) = overrides.nfe {
            return Ok(vec![n]);
        }
        match &camp.nfe {
            NfeList::Published(s) if s.eq_ignore_ascii_case("published") => Ok(vec![published_nfe(f)]),
            NfeList::Published(s) => {
                Err(HarnessError::Config(format!("campaign.nfe must be a list or \"published\", got \"{s}\"")))
            }
            NfeList::Values(v) if v.is_empty() => Err(HarnessError::Config("campaign.nfe is empty".into())),
            NfeList::Values(v) => Ok(v.clone()),
        }
    };

    let mut cells = Vec::new();
    for &function in &functions {
        for nfe in budgets(function)? {
            if nfe == 0 {
                return Err(HarnessError::Config("NFE must be positive".into()));
            }
            let requested = dimension.or_else(|| dimension_for_nfe(nfe)).ok_or_else(|| {
                HarnessError::Config(format!(
                    "no default dimension for NFE {nfe}; set campaign.dimension or pass --dim"
                ))
            })?;
            let dim = function.resolve_dimension(requested);
            for optimizer in &optimizers {
                let floor = match optimizer {
                    OptimizerSpec::Upbo(c) => c.init_pop as u64,
                    OptimizerSpec::Baseline(b) => b.population as u64,
                };
                if nfe < floor {
                    return Err(HarnessError::Config(format!(
                        "NFE {nfe} is below the initial sample of {} ({floor})",
                        optimizer.name()
                    )));
                }
                cells.push(Cell { optimizer: optimizer.clone(), function, dimension: dim, nfe });
            }
        }
    }

    let trials = overrides.trials.unwrap_or(camp.trials);
    let parallelism = overrides.parallelism.unwrap_or(camp.parallelism);
    if trials == 0 {
        return Err(HarnessError::Config("trials must be positive".into()));
    }
    if parallelism == 0 {
        return Err(HarnessError::Config("parallelism must be positive".into()));
    }
    let output_dir = overrides
        .out
        .clone()
        .or(camp.out)
        .ok_or_else(|| HarnessError::Config("no output directory; set campaign.out or pass --out".into()))?;
    Ok(ExperimentPlan {
        cells,
        trials,
        base_seed: overrides.seed.unwrap_or(camp.seed),
        landscape_seed: camp.landscape_seed,
        output_dir,
        parallelism,
        trace: overrides.trace || camp.trace,
    })
}

pub fn load_plan(path: &Path, overrides: &Overrides) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_plan(&text, overrides)
}
