//! Rendering of the three comparison tables from a results directory:
//! mean ± std errors, outperformance counts with totals, and paired t-test
//! p-values of UPBO against every other optimizer. Each table is written
//! as `.csv` and as aligned `.txt`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use upbo_core::stats::{aggregate, outperformance_counts, paired_t_test, ComparisonTable, ProblemKey, TTestOutcome, TrialResult};
use upbo_core::upbo::OPTIMIZER_NAME;

use crate::error::{HarnessError, Result};
use crate::reference::{lookup, REFERENCE_OPTIMIZERS};
use crate::results::{read_results, RESULTS_FILE};

/// Column order of the published tables; unknown names follow alphabetically.
pub const CANONICAL_ORDER: [&str; 10] =
    ["CLPSO", "ICA", "CICA", "GA", "SA", "BA", "PSO", "PSO-W", "PSO-w-local", "UPBO"];

pub const MISSING: &str = "-";
pub const NOT_APPLICABLE: &str = "NA";

pub fn order_optimizers<'a>(names: impl IntoIterator<Item = &'a String>) -> Vec<String> {
    let mut names: Vec<String> = names.into_iter().cloned().collect();
    let rank = |n: &str| {
        let base = n.split('[').next().unwrap_or(n);
        CANONICAL_ORDER.iter().position(|c| *c == base).unwrap_or(CANONICAL_ORDER.len())
    };
    names.sort_by(|a, b| rank(a).cmp(&rank(b)).then_with(|| a.cmp(b)));
    names.dedup();
    names
}

/// `1.23E-04` style with a two-digit exponent.
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.2E}");
    let (mantissa, exp) = s.split_once('E').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

/// Aligned plain text: first `left` columns left-aligned, the rest right.
pub fn align(rows: &[Vec<String>], left: usize) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            if c < left {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn csv_text(rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| HarnessError::format("<table>", e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::format("<table>", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn problem_cells(p: &ProblemKey) -> Vec<String> {
    vec![p.function.to_string(), p.function.name().to_string(), p.dimension.to_string(), p.nfe.to_string()]
}

const PROBLEM_HEADER: [&str; 4] = ["function", "name", "dimension", "nfe"];

/// A rendered table in both output forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub csv: String,
    pub text: String,
}

/// Everything the report needs, derived from the result rows.
#[derive(Debug, Clone)]
pub struct Report {
    pub trials: Vec<TrialResult>,
    pub table: ComparisonTable,
    pub optimizers: Vec<String>,
}

impl Report {
    /// Rows of one optimizer name run under several configurations are kept
    /// apart as `NAME[fingerprint]`.
    pub fn load(dir: &Path) -> Result<Self> {
        let rows = read_results(&dir.join(RESULTS_FILE))?;
        let mut fingerprints: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for r in &rows {
            fingerprints.entry(&r.key.optimizer).or_default().insert(&r.key.fingerprint);
        }
        let trials: Vec<TrialResult> = rows
            .iter()
            .map(|r| {
                let mut t = r.to_trial();
                if fingerprints[r.key.optimizer.as_str()].len() > 1 {
                    t.optimizer = format!("{}[{}]", r.key.optimizer, r.key.fingerprint);
                }
                t
            })
            .collect();
        Ok(Self::from_trials(trials))
    }

    pub fn from_trials(trials: Vec<TrialResult>) -> Self {
        let table = aggregate(&trials);
        let optimizers = order_optimizers(&table.optimizers);
        Report { trials, table, optimizers }
    }

    pub fn errors(&self) -> Result<Rendered> {
        let mut csv_rows = vec![PROBLEM_HEADER.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
        for o in &self.optimizers {
            csv_rows[0].extend([format!("{o}_mean"), format!("{o}_std"), format!("{o}_n")]);
        }
        let mut txt_rows = vec![vec!["Function".into(), "Name".into(), "Dim".into(), "NFE".into()]];
        txt_rows[0].extend(self.optimizers.iter().cloned());
        for p in &self.table.problems {
            let mut c = problem_cells(p);
            let mut t = problem_cells(p);
            for o in &self.optimizers {
                match self.table.cell(*p, o) {
                    Some(cell) => {
                        let std = cell.std.map_or(NOT_APPLICABLE.to_string(), |s| s.to_string());
                        c.extend([cell.mean.to_string(), std, cell.count.to_string()]);
                        let std = cell.std.map_or(NOT_APPLICABLE.to_string(), sci);
                        t.push(format!("{} ± {}", sci(cell.mean), std));
                    }
                    None => {
                        c.extend([String::new(), String::new(), "0".into()]);
                        t.push(MISSING.into());
                    }
                }
            }
            csv_rows.push(c);
            txt_rows.push(t);
        }
        Ok(Rendered { csv: csv_text(&csv_rows)?, text: align(&txt_rows, 2) })
    }

    pub fn ranks(&self) -> Result<Rendered> {
        let mut header: Vec<String> = PROBLEM_HEADER.iter().map(|s| s.to_string()).collect();
        header.extend(self.optimizers.iter().cloned());
        let mut rows = vec![header];
        for p in &self.table.problems {
            let mut r = problem_cells(p);
            for o in &self.optimizers {
                r.push(self.table.rank(*p, o).map_or(MISSING.to_string(), |c| c.to_string()));
            }
            rows.push(r);
        }
        let mut total = vec!["Total Score".to_string(), String::new(), String::new(), String::new()];
        for o in &self.optimizers {
            total.push(self.table.total_scores.get(o).copied().unwrap_or(0).to_string());
        }
        rows.push(total);
        Ok(Rendered { csv: csv_text(&rows)?, text: align(&rows, 2) })
    }

    /// UPBO against each other optimizer, paired by seed.
    pub fn ttests(&self) -> Result<Rendered> {
        let ours: Vec<&String> = self.optimizers.iter().filter(|o| o.split('[').next() == Some(OPTIMIZER_NAME)).collect();
        let others: Vec<&String> = self.optimizers.iter().filter(|o| o.split('[').next() != Some(OPTIMIZER_NAME)).collect();
        let mut by_cell: BTreeMap<(ProblemKey, &str), BTreeMap<u64, f64>> = BTreeMap::new();
        for t in &self.trials {
            by_cell.entry((t.problem(), t.optimizer.as_str())).or_default().insert(t.seed, t.final_error);
        }
        let mut csv_header: Vec<String> = PROBLEM_HEADER.iter().map(|s| s.to_string()).collect();
        let mut txt_header = vec!["Function".to_string(), "Name".into(), "Dim".into(), "NFE".into()];
        for u in &ours {
            for o in &others {
                let label = if ours.len() > 1 { format!("{u} vs {o}") } else { (*o).clone() };
                csv_header.extend([format!("{label}_t"), format!("{label}_p"), format!("{label}_pairs")]);
                txt_header.push(label);
            }
        }
        let mut csv_rows = vec![csv_header];
        let mut txt_rows = vec![txt_header];
        for p in &self.table.problems {
            let mut c = problem_cells(p);
            let mut t = problem_cells(p);
            for u in &ours {
                for o in &others {
                    let (a, b) = (by_cell.get(&(*p, u.as_str())), by_cell.get(&(*p, o.as_str())));
                    let pairs: Vec<(f64, f64)> = match (a, b) {
                        (Some(a), Some(b)) => a.iter().filter_map(|(s, x)| b.get(s).map(|y| (*x, *y))).collect(),
                        _ => Vec::new(),
                    };
                    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                    match paired_t_test(&xs, &ys) {
                        Ok(TTestOutcome::Defined { t: stat, p: pv }) => {
                            c.extend([stat.to_string(), pv.to_string(), pairs.len().to_string()]);
                            t.push(format!("{pv:.4}"));
                        }
                        Ok(TTestOutcome::NotApplicable) => {
                            c.extend([NOT_APPLICABLE.into(), NOT_APPLICABLE.into(), pairs.len().to_string()]);
                            t.push(NOT_APPLICABLE.into());
                        }
                        Err(_) => {
                            c.extend([String::new(), String::new(), pairs.len().to_string()]);
                            t.push(MISSING.into());
                        }
                    }
                }
            }
            csv_rows.push(c);
            txt_rows.push(t);
        }
        Ok(Rendered { csv: csv_text(&csv_rows)?, text: align(&txt_rows, 2) })
    }

    /// Published values for the optimizers not implemented here, beside the
    /// reproduced means, with outperformance counts over the combined set.
    /// Published budgets and dimensions may differ from the local ones.
    pub fn with_reference(&self) -> Result<Rendered> {
        let mut header = vec!["Function".to_string(), "Name".into(), "Dim".into(), "NFE".into()];
        header.extend(self.optimizers.iter().cloned());
        header.extend(REFERENCE_OPTIMIZERS.iter().map(|r| format!("{r}*")));
        let mut err_rows = vec![header.clone()];
        let mut rank_rows = vec![header];
        for p in &self.table.problems {
            let mut e = problem_cells(p);
            let mut means = Vec::new();
            for o in &self.optimizers {
                match self.table.cell(*p, o) {
                    Some(c) => {
                        e.push(sci(c.mean));
                        means.push(Some(c.mean));
                    }
                    None => {
                        e.push(MISSING.into());
                        means.push(None);
                    }
                }
            }
            for r in REFERENCE_OPTIMIZERS {
                match lookup(p.function, r) {
                    Some(v) => {
                        e.push(format!("{} ± {} @{}", v.mean_text, v.std_text, v.nfe));
                        means.push(Some(v.mean));
                    }
                    None => {
                        e.push(MISSING.into());
                        means.push(None);
                    }
                }
            }
            let present: Vec<f64> = means.iter().flatten().copied().collect();
            let counts = outperformance_counts(&present);
            let mut it = counts.into_iter();
            let mut r = problem_cells(p);
            for m in &means {
                r.push(if m.is_some() { it.next().expect("count").to_string() } else { MISSING.into() });
            }
            err_rows.push(e);
            rank_rows.push(r);
        }
        let note = "* published values, not reproduced here; @N is the published NFE\n";
        let text = format!("{}\n{}\n{note}", align(&err_rows, 2), align(&rank_rows, 2));
        let mut csv_rows = err_rows;
        csv_rows.extend(rank_rows.into_iter().skip(1).map(|mut r| {
            r[0] = format!("{} rank", r[0]);
            r
        }));
        Ok(Rendered { csv: csv_text(&csv_rows)?, text })
    }
}

fn write_pair(dir: &Path, stem: &str, r: &Rendered) -> Result<()> {
    for (ext, body) in [("csv", &r.csv), ("txt", &r.text)] {
        let path = dir.join(format!("{stem}.{ext}"));
        fs::write(&path, body).map_err(|e| HarnessError::io(&path, e))?;
    }
    Ok(())
}

/// Writes `errors`, `ranks` and `ttest` tables (and `reference` on request)
/// next to the results file.
pub fn write_reports(dir: &Path, include_reference: bool) -> Result<Report> {
    let report = Report::load(dir)?;
    write_pair(dir, "errors", &report.errors()?)?;
    write_pair(dir, "ranks", &report.ranks()?)?;
    write_pair(dir, "ttest", &report.ttests()?)?;
    if include_reference {
        write_pair(dir, "reference", &report.with_reference()?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use upbo_core::benchmarks::FunctionId;

    fn trial(opt: &str, f: FunctionId, seed: u64, err: f64) -> TrialResult {
        TrialResult {
            optimizer: opt.into(),
            function: f,
            dimension: 3,
            nfe: 500,
            seed,
            final_error: err,
            evaluations_used: 500,
            trace: Vec::new(),
        }
    }

    fn sample() -> Report {
        let mut t = Vec::new();
        for s in 0..4 {
            t.push(trial("UPBO", FunctionId::F2, s, 0.1 + s as f64 * 0.01));
            t.push(trial("SA", FunctionId::F2, s, 0.5 + (s * s) as f64 * 0.02));
            t.push(trial("PSO", FunctionId::F2, s, 0.1 + s as f64 * 0.01));
            t.push(trial("UPBO", FunctionId::F9, s, 2.0));
        }
        t.push(trial("SA", FunctionId::F9, 0, 1.0));
        Report::from_trials(t)
    }

    #[test]
    fn scientific_format() {
        assert_eq!(sci(0.000149), "1.49E-04");
        assert_eq!(sci(2.0), "2.00E+00");
        assert_eq!(sci(12345.0), "1.23E+04");
        assert_eq!(sci(0.0), "0.00E+00");
        assert_eq!(sci(f64::INFINITY), "inf");
        assert_eq!(sci(1e-300), "1.00E-300");
    }

    #[test]
    fn canonical_column_order() {
        let names: Vec<String> = ["UPBO", "Zed", "PSO", "GA", "PSO-w-local", "SA", "PSO-W"].iter().map(|s| s.to_string()).collect();
        assert_eq!(order_optimizers(&names), vec!["GA", "SA", "PSO", "PSO-W", "PSO-w-local", "UPBO", "Zed"]);
    }

    #[test]
    fn alignment() {
        let rows = vec![vec!["a".to_string(), "bb".into()], vec!["ccc".into(), "d".into()]];
        assert_eq!(align(&rows, 1), "a    bb\nccc   d\n");
    }

    #[test]
    fn tables() {
        let r = sample();
        assert_eq!(r.optimizers, vec!["SA", "PSO", "UPBO"]);
        let e = r.errors().unwrap();
        let lines: Vec<&str> = e.text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].contains(MISSING));
        assert!(lines[2].contains("± NA"));
        assert!(e.csv.starts_with("function,name,dimension,nfe,SA_mean,SA_std,SA_n,"));

        let k = r.ranks().unwrap();
        assert!(k.text.lines().last().unwrap().starts_with("Total Score"));
        // F2: SA worst, PSO ties UPBO. F9: SA beats UPBO.
        assert!(k.csv.contains("F2,Sphere,3,500,0,1,1\n"));
        assert!(k.csv.contains("F9,Rastrigin,3,500,1,-,0\n"));

        let t = r.ttests().unwrap();
        let header = t.text.lines().next().unwrap();
        assert!(header.contains("SA") && header.contains("PSO") && !header.contains("UPBO"));
        let f2 = t.text.lines().nth(1).unwrap();
        assert!(f2.ends_with(NOT_APPLICABLE), "{f2}");
        let f9 = t.text.lines().nth(2).unwrap();
        assert!(f9.contains(MISSING));
    }

    #[test]
    fn reference_block_is_marked() {
        let r = sample().with_reference().unwrap();
        assert!(r.text.contains("CLPSO*"));
        assert!(r.text.contains("not reproduced"));
        assert!(r.text.contains("5.15E-29 ± 2.16E-28 @180000"));
    }
}
