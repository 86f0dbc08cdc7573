use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use upbo_core::baselines::BaselineKind;
use upbo_core::benchmarks::{Benchmark, FunctionId};
use upbo_core::certainty::CertaintyMetricKind;
use upbo_core::hulls::HullKind;
use upbo_core::update::UpdateMethodKind;
use upbo_core::upbo::OPTIMIZER_NAME;

use crate::campaign::{run_campaign, LANDSCAPES_DIR};
use crate::config::{load_plan, Overrides};
use crate::error::{HarnessError, Result};
use crate::landscape::benchmark_for;
use crate::reference::REFERENCE_OPTIMIZERS;
use crate::report::write_reports;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_CELL_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "upbo", version, about = "Run and compare region-certainty optimizers on benchmark functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute (or resume) the campaign described by a plan file.
    Run {
        plan: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Render the error, rank and t-test tables for a results directory.
    Report {
        dir: PathBuf,
        /// Also render published values of optimizers not implemented here.
        #[arg(long)]
        reference: bool,
    },
    /// Evaluate one benchmark at a point and print the cost.
    Eval {
        function: String,
        #[arg(required = true, allow_negative_numbers = true, num_args = 1..)]
        x: Vec<f64>,
        /// Landscape seed for the rotated functions.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Read or store the landscape files under this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the functions, hull types, metrics, update methods and optimizers.
    List,
}

#[derive(Debug, Args, Default)]
pub struct RunFlags {
    /// Base seed; trial i runs with seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// One budget for every function.
    #[arg(long)]
    pub nfe: Option<u64>,
    /// Dimension for every function (fixed-dimension functions keep theirs).
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Store the best-cost trace of every trial.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl From<RunFlags> for Overrides {
    fn from(f: RunFlags) -> Self {
        Overrides {
            seed: f.seed,
            trials: f.trials,
            nfe: f.nfe,
            dimension: f.dim,
            parallelism: f.parallelism,
            trace: f.trace,
            out: f.out,
        }
    }
}

fn list(out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "functions:")?;
    for f in FunctionId::ALL {
        let (lo, hi) = f.range();
        let dims = match f.fixed_dimension() {
            Some(d) => format!("d={d}"),
            None => format!("d>={}", f.min_dimension()),
        };
        writeln!(out, "  {:<4} {:<28} {:<21} [{lo}, {hi}] {dims}", f.to_string(), f.name(), f.group().label())?;
    }
    writeln!(out, "hull types:")?;
    for h in HullKind::ALL {
        writeln!(out, "  {}", h.tag())?;
    }
    writeln!(out, "certainty metrics:")?;
    for m in CertaintyMetricKind::ALL {
        writeln!(out, "  {}", m.tag())?;
    }
    writeln!(out, "update methods:")?;
    for u in UpdateMethodKind::ALL {
        writeln!(out, "  {}", u.tag())?;
    }
    writeln!(out, "optimizers:")?;
    writeln!(out, "  {OPTIMIZER_NAME}")?;
    for b in BaselineKind::ALL {
        writeln!(out, "  {}", b.tag())?;
    }
    writeln!(out, "reference only:")?;
    for r in REFERENCE_OPTIMIZERS {
        writeln!(out, "  {r}")?;
    }
    Ok(())
}

fn eval(function: &str, x: &[f64], seed: u64, out_dir: Option<PathBuf>) -> Result<f64> {
    let id: FunctionId = function.parse()?;
    let d = x.len();
    if let Some(fixed) = id.fixed_dimension() {
        if d != fixed {
            return Err(HarnessError::Config(format!("{id} takes exactly {fixed} coordinates, got {d}")));
        }
    }
    let bench = match out_dir {
        Some(dir) => benchmark_for(&dir.join(LANDSCAPES_DIR), id, d, seed)?,
        None => Benchmark::new(id, d, seed)?,
    };
    Ok(bench.evaluate(x))
}

/// Runs a parsed command; returns the process exit status.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result: Result<i32> = (|| match cli.command {
        Command::Run { plan, flags } => {
            let plan = load_plan(&plan, &flags.into())?;
            let summary = run_campaign(&plan)?;
            let _ = writeln!(
                out,
                "executed {} trials, skipped {} already recorded, {} failed; tables in {}",
                summary.executed,
                summary.skipped,
                summary.failed,
                plan.output_dir.display()
            );
            Ok(if summary.failed > 0 { EXIT_CELL_FAILURE } else { EXIT_OK })
        }
        Command::Report { dir, reference } => {
            let report = write_reports(&dir, reference)?;
            let _ = write!(out, "{}\n{}\n{}", report.errors()?.text, report.ranks()?.text, report.ttests()?.text);
            if reference {
                let _ = write!(out, "\n{}", report.with_reference()?.text);
            }
            Ok(EXIT_OK)
        }
        Command::Eval { function, x, seed, out: dir } => {
            let _ = writeln!(out, "{}", eval(&function, &x, seed, dir)?);
            Ok(EXIT_OK)
        }
        Command::List => {
            let _ = list(out);
            Ok(EXIT_OK)
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
