//! Derivative-free global optimization by certainty-weighted region sampling.
//!
//! Each iteration scatters random spheres (or ellipsoids) over the normalized
//! search box, scores every region with a certainty metric computed from the
//! fitnesses of the solutions it already contains, and spends the iteration's
//! proposal budget on the most certain regions in proportion to their scores.
//!
//! The crate is `no_std` (it needs `alloc`). It also carries the benchmark
//! functions, a handful of reference optimizers (PSO variants, GA, SA) and the
//! statistics used to compare them. File formats and the CLI live in
//! `upbo-harness`.
#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod baselines;
pub mod benchmarks;
pub mod budget;
pub mod certainty;
pub mod domain;
mod error;
pub mod hulls;
pub mod linalg;
pub mod population;
pub mod random;
pub mod stats;
pub mod trial;
pub mod update;
pub mod upbo;

pub use budget::{EvalBudget, Evaluator, Objective};
pub use domain::SearchDomain;
pub use error::{Error, Result};
pub use population::{Individual, Population};
pub use random::RandomSource;
pub use trial::{RunResult, TraceEntry};
