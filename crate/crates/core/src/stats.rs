//! Trial aggregation: mean/std error tables, outperformance counts and the
//! paired t-test.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::benchmarks::{Benchmark, FunctionId};
use crate::trial::RunResult;
use crate::{Error, Result};

/// One seeded run of one optimizer on one problem, reduced to what the
/// reports need.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub optimizer: String,
    pub function: FunctionId,
    pub dimension: usize,
    pub nfe: u64,
    pub seed: u64,
    pub final_error: f64,
    pub evaluations_used: u64,
    /// `(iteration, best cost)` pairs.
    pub trace: Vec<(u64, f64)>,
}

impl TrialResult {
    pub fn from_run(run: &RunResult, benchmark: &Benchmark, nfe: u64) -> Self {
        TrialResult {
            optimizer: run.optimizer.clone(),
            function: benchmark.id(),
            dimension: benchmark.dimension(),
            nfe,
            seed: run.seed,
            final_error: benchmark.error_of(run.best_cost()),
            evaluations_used: run.evaluations_used,
            trace: run.trace.iter().map(|t| (t.iteration, t.best_cost)).collect(),
        }
    }

    pub fn problem(&self) -> ProblemKey {
        ProblemKey { function: self.function, dimension: self.dimension, nfe: self.nfe }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProblemKey {
    pub function: FunctionId,
    pub dimension: usize,
    pub nfe: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub mean: f64,
    /// Sample standard deviation; `None` with fewer than two trials.
    pub std: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonTable {
    pub problems: Vec<ProblemKey>,
    pub optimizers: Vec<String>,
    pub rows: BTreeMap<(ProblemKey, String), CellStats>,
    /// Per problem, how many optimizers each one strictly beats on mean error.
    pub ranks: BTreeMap<ProblemKey, BTreeMap<String, usize>>,
    pub total_scores: BTreeMap<String, usize>,
}

impl ComparisonTable {
    /// `None` means no trials were recorded for the cell.
    pub fn cell(&self, problem: ProblemKey, optimizer: &str) -> Option<&CellStats> {
        self.rows.get(&(problem, String::from(optimizer)))
    }

    pub fn rank(&self, problem: ProblemKey, optimizer: &str) -> Option<usize> {
        self.ranks.get(&problem)?.get(optimizer).copied()
    }
}

pub fn mean_and_std(values: &[f64]) -> Option<(f64, Option<f64>)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.len() >= 2).then(|| {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        libm::sqrt(ss / (n - 1.0))
    });
    Some((mean, std))
}

/// Optimizer `o` scores the number of optimizers whose mean is strictly
/// larger. Equal means beat neither way.
pub fn outperformance_counts(means: &[f64]) -> Vec<usize> {
    means.iter().map(|m| means.iter().filter(|o| m < *o).count()).collect()
}

/// Groups by problem and optimizer. Errors are sorted inside each cell
/// before summation so the output does not depend on trial order.
pub fn aggregate(results: &[TrialResult]) -> ComparisonTable {
    let mut grouped: BTreeMap<(ProblemKey, String), Vec<f64>> = BTreeMap::new();
    for r in results {
        grouped.entry((r.problem(), r.optimizer.clone())).or_default().push(r.final_error);
    }
    let mut table = ComparisonTable::default();
    let mut problems = BTreeSet::new();
    let mut optimizers = BTreeSet::new();
    for ((problem, optimizer), mut errors) in grouped {
        errors.sort_by(f64::total_cmp);
        let (mean, std) = mean_and_std(&errors).expect("grouped cells are nonempty");
        problems.insert(problem);
        optimizers.insert(optimizer.clone());
        table.rows.insert((problem, optimizer), CellStats { mean, std, count: errors.len() });
    }
    table.problems = problems.into_iter().collect();
    table.optimizers = optimizers.into_iter().collect();

    for &problem in &table.problems {
        let present: Vec<(&String, f64)> = table
            .optimizers
            .iter()
            .filter_map(|o| table.rows.get(&(problem, o.clone())).map(|c| (o, c.mean)))
            .collect();
        let means: Vec<f64> = present.iter().map(|p| p.1).collect();
        let counts = outperformance_counts(&means);
        let entry = table.ranks.entry(problem).or_default();
        for ((name, _), count) in present.iter().zip(counts) {
            entry.insert((*name).clone(), count);
            *table.total_scores.entry((*name).clone()).or_default() += count;
        }
    }
    table
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TTestOutcome {
    Defined { t: f64, p: f64 },
    /// The differences have zero spread, so the statistic is undefined.
    NotApplicable,
}

impl TTestOutcome {
    pub fn p_value(&self) -> Option<f64> {
        match self {
            TTestOutcome::Defined { p, .. } => Some(*p),
            TTestOutcome::NotApplicable => None,
        }
    }
}

/// Two-sided paired t-test on `a − b`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TTestOutcome> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "paired samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidInput("paired t-test needs at least two pairs".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("paired samples must be finite".into()));
    }
    let (mean, sd) = mean_and_std(&d).expect("nonempty");
    let sd = sd.expect("n >= 2");
    if sd == 0.0 {
        return Ok(TTestOutcome::NotApplicable);
    }
    let n = d.len() as f64;
    let t = mean / (sd / libm::sqrt(n));
    Ok(TTestOutcome::Defined { t, p: two_sided_p(t, n - 1.0) })
}

/// Density of Student's t with `dof` degrees of freedom.
pub fn t_density(x: f64, dof: f64) -> f64 {
    libm::exp(log_t_norm(dof) - 0.5 * (dof + 1.0) * libm::log1p(x * x / dof))
}

fn log_t_norm(dof: f64) -> f64 {
    libm::lgamma(0.5 * (dof + 1.0)) - libm::lgamma(0.5 * dof) - 0.5 * libm::log(dof * core::f64::consts::PI)
}

/// `P(|T| ≥ |t|)`. With `x = √ν·tan θ` the tail integral of the density
/// becomes `√ν·c ∫ cos^(ν−1) θ dθ` over `[atan(|t|/√ν), π/2]`, which is
/// smooth and bounded. The integrand narrows like `1/√ν` near the lower
/// limit, so panels start at that width and double.
pub fn two_sided_p(t: f64, dof: f64) -> f64 {
    let root = libm::sqrt(dof);
    let lo = libm::atan(t.abs() / root);
    let hi = core::f64::consts::FRAC_PI_2;
    if lo >= hi {
        return 0.0;
    }
    let scale = root * libm::exp(log_t_norm(dof));
    let g = |theta: f64| libm::pow(libm::cos(theta), dof - 1.0);
    let mut width = 0.1 / libm::sqrt(dof + 1.0);
    let mut a = lo;
    let mut tail = 0.0;
    while a < hi {
        let b = (a + width).min(hi);
        tail += adaptive_simpson(&g, a, b, 1e-14, 30);
        a = b;
        width *= 2.0;
    }
    (2.0 * scale * tail).clamp(0.0, 1.0)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    /// `1 − 2∫₀^|t| f` by the composite trapezoid rule on the raw density.
    fn trapezoid_p(t: f64, dof: f64) -> f64 {
        let x_end = t.abs();
        let steps = (x_end * 2000.0).max(20_000.0) as usize;
        let h = x_end / steps as f64;
        let mut area = 0.5 * (t_density(0.0, dof) + t_density(x_end, dof));
        for i in 1..steps {
            area += t_density(i as f64 * h, dof);
        }
        1.0 - 2.0 * area * h
    }

    fn trial(opt: &str, f: FunctionId, seed: u64, err: f64) -> TrialResult {
        TrialResult {
            optimizer: opt.into(),
            function: f,
            dimension: 3,
            nfe: 100,
            seed,
            final_error: err,
            evaluations_used: 100,
            trace: vec![(0, err)],
        }
    }

    #[test]
    fn two_point_sample() {
        let (m, s) = mean_and_std(&[1.0, 3.0]).unwrap();
        assert_eq!(m, 2.0);
        assert!((s.unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(mean_and_std(&[4.0]), Some((4.0, None)));
        assert_eq!(mean_and_std(&[]), None);
    }

    #[test]
    fn counts_strict_and_ties() {
        assert_eq!(outperformance_counts(&[0.1, 0.2, 0.3]), vec![2, 1, 0]);
        assert_eq!(outperformance_counts(&[0.5, 0.5]), vec![0, 0]);
        assert_eq!(outperformance_counts(&[0.5, 0.5, 1.0]), vec![1, 1, 0]);
    }

    #[test]
    fn aggregate_tables() {
        let rows = vec![
            trial("A", FunctionId::F1, 0, 0.1),
            trial("A", FunctionId::F1, 1, 0.1),
            trial("B", FunctionId::F1, 0, 0.3),
            trial("B", FunctionId::F1, 1, 0.1),
            trial("A", FunctionId::F2, 0, 5.0),
            trial("A", FunctionId::F2, 1, 5.0),
            trial("B", FunctionId::F2, 0, 1.0),
            trial("B", FunctionId::F2, 1, 1.0),
            trial("C", FunctionId::F2, 0, 1.0),
        ];
        let t = aggregate(&rows);
        let p1 = rows[0].problem();
        let p2 = rows[4].problem();
        assert_eq!(t.problems, vec![p1, p2]);
        assert_eq!(t.optimizers, vec!["A", "B", "C"]);
        let b1 = t.cell(p1, "B").unwrap();
        assert!((b1.mean - 0.2).abs() < 1e-15);
        assert_eq!(b1.count, 2);
        assert!(t.cell(p1, "C").is_none());
        assert_eq!(t.cell(p2, "C").unwrap().std, None);
        assert_eq!(t.rank(p1, "A"), Some(1));
        assert_eq!(t.rank(p1, "B"), Some(0));
        assert_eq!(t.rank(p1, "C"), None);
        assert_eq!(t.rank(p2, "A"), Some(0));
        assert_eq!(t.rank(p2, "B"), Some(1));
        assert_eq!(t.rank(p2, "C"), Some(1));
        assert_eq!(t.total_scores["A"], 1);
        assert_eq!(t.total_scores["B"], 1);
        assert_eq!(t.total_scores["C"], 1);
    }

    #[test]
    fn degenerate_differences_are_na() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(paired_t_test(&a, &a).unwrap(), TTestOutcome::NotApplicable);
        let b: Vec<f64> = a.iter().map(|x| x - 1.0).collect();
        let ones = [2.0; 5];
        assert_eq!(paired_t_test(&ones, &[1.0; 5]).unwrap(), TTestOutcome::NotApplicable);
        assert_eq!(paired_t_test(&a, &b).unwrap(), TTestOutcome::NotApplicable);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(paired_t_test(&[1.0, 2.0], &[1.0]), Err(Error::InvalidInput(_))));
        assert!(matches!(paired_t_test(&[1.0], &[2.0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn shifted_pairs_against_trapezoid() {
        let noise = [0.01, -0.01, 0.02, -0.02, 0.0];
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b: Vec<f64> = a.iter().zip(noise).map(|(x, e)| x + 1.0 + e).collect();
        let TTestOutcome::Defined { t, p } = paired_t_test(&a, &b).unwrap() else { panic!() };
        // mean(d) = −1, sd(d) = sqrt(0.001/4)
        let expect_t = -1.0 / (0.00025f64.sqrt() / 5f64.sqrt());
        assert!((t - expect_t).abs() < 1e-9 * expect_t.abs());
        assert!((p - trapezoid_p(t, 4.0)).abs() < 1e-6);
    }

    #[test]
    fn closed_forms() {
        // ν = 1 is Cauchy: p = 1 − 2 atan(|t|)/π.
        for t in [0.3f64, 1.0, 4.0, 50.0] {
            let expect = 1.0 - 2.0 * t.atan() / core::f64::consts::PI;
            assert!((two_sided_p(t, 1.0) - expect).abs() < 1e-12);
        }
        // ν = 2: p = 1 − |t|/sqrt(2 + t²).
        for t in [0.3f64, 1.0, 4.0] {
            let expect = 1.0 - t / (2.0 + t * t).sqrt();
            assert!((two_sided_p(t, 2.0) - expect).abs() < 1e-12);
        }
        assert!((two_sided_p(0.0, 7.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn large_dof_matches_normal_tail() {
        // P(|Z| ≥ 1.959963984540054) = 0.05.
        let p = two_sided_p(1.959963984540054, 1e6);
        assert!((p - 0.05).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn matches_oracle(pairs in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..=50)) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            if let TTestOutcome::Defined { t, p } = paired_t_test(&a, &b).unwrap() {
                let n = a.len() as f64;
                let d: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                let m = d.iter().sum::<f64>() / n;
                let sd = (d.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
                let direct_t = m / (sd / n.sqrt());
                prop_assert!((t - direct_t).abs() <= 1e-6 * direct_t.abs().max(1.0));
                prop_assert!((p - trapezoid_p(direct_t, n - 1.0)).abs() < 1e-6);
            }
        }

        #[test]
        fn antisymmetric(pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2..20)) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            match (paired_t_test(&a, &b).unwrap(), paired_t_test(&b, &a).unwrap()) {
                (TTestOutcome::Defined { t: t1, p: p1 }, TTestOutcome::Defined { t: t2, p: p2 }) => {
                    prop_assert!((t1 + t2).abs() <= 1e-12 * t1.abs().max(1.0));
                    prop_assert!((p1 - p2).abs() < 1e-12);
                    prop_assert!(p1 > 0.0 && p1 <= 1.0);
                }
                (TTestOutcome::NotApplicable, TTestOutcome::NotApplicable) => {}
                _ => prop_assert!(false, "asymmetric applicability"),
            }
        }

        #[test]
        fn p_monotone_in_t(dof in 1.0f64..60.0, t1 in 0.0f64..30.0, dt in 0.0f64..5.0) {
            prop_assert!(two_sided_p(t1 + dt, dof) <= two_sided_p(t1, dof) + 1e-15);
        }

        #[test]
        fn aggregate_permutation_invariant(
            errs in prop::collection::vec((0usize..3, 0usize..2, 0.0f64..100.0), 1..40),
            seed in any::<u64>(),
        ) {
            let names = ["A", "B", "C"];
            let fns = [FunctionId::F1, FunctionId::F9];
            let rows: Vec<TrialResult> = errs
                .iter()
                .enumerate()
                .map(|(i, &(o, f, e))| trial(names[o], fns[f], i as u64, e))
                .collect();
            let mut shuffled = rows.clone();
            let mut rng = crate::RandomSource::new(seed);
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.index(i + 1));
            }
            prop_assert_eq!(aggregate(&rows), aggregate(&shuffled));
        }
    }
}
