//! Evaluation-budget accounting. Every optimizer calls the objective through
//! an [`Evaluator`], so the count is taken at the call site and can never
//! exceed the configured limit.

use crate::{Error, Result};

/// A black-box cost function over domain coordinates. Lower is better.
///
/// Trials may run on several threads at once, so implementations must be
/// safe to share.
pub trait Objective: Sync {
    fn cost(&self, x: &[f64]) -> f64;
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn cost(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    limit: u64,
    used: u64,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::InvalidInput("evaluation budget must be positive".into()));
        }
        Ok(Self { limit, used: 0 })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    /// Reserves one evaluation; `false` once the limit is reached.
    pub fn try_consume(&mut self) -> bool {
        if self.used < self.limit {
            self.used += 1;
            true
        } else {
            false
        }
    }
}

/// Outcome of a single billed objective call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluation {
    Finite(f64),
    /// The objective returned NaN or an infinity; the call still counts.
    Discarded,
}

pub struct Evaluator<'a, O: Objective + ?Sized> {
    objective: &'a O,
    budget: EvalBudget,
    discarded: u64,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    pub fn new(objective: &'a O, budget: EvalBudget) -> Self {
        Self { objective, budget, discarded: 0 }
    }

    /// `None` when the budget is spent and the objective was not called.
    pub fn evaluate(&mut self, x: &[f64]) -> Option<Evaluation> {
        if !self.budget.try_consume() {
            return None;
        }
        let c = self.objective.cost(x);
        if c.is_finite() {
            Some(Evaluation::Finite(c))
        } else {
            self.discarded += 1;
            Some(Evaluation::Discarded)
        }
    }

    pub fn budget(&self) -> &EvalBudget {
        &self.budget
    }

    pub fn used(&self) -> u64 {
        self.budget.used()
    }

    pub fn remaining(&self) -> u64 {
        self.budget.remaining()
    }

    pub fn is_exhausted(&self) -> bool {
        self.budget.is_exhausted()
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }
}
