use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// One candidate solution. `position` is in domain coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub position: Vec<f64>,
    pub cost: f64,
    /// Derived from the population's costs; higher is better.
    pub fitness: f64,
}

impl Individual {
    pub fn new(position: Vec<f64>, cost: f64) -> Self {
        Self { position, cost, fitness: 0.0 }
    }
}

/// Translates costs into nonnegative fitnesses: `max(costs) - cost`.
///
/// The same translation is used whatever the sign of the costs, so the
/// lowest cost always receives the largest fitness.
pub fn compute_fitnesses(costs: &[f64]) -> Result<Vec<f64>> {
    if costs.is_empty() {
        return Err(Error::InvalidInput("cannot derive fitness from an empty cost vector".into()));
    }
    if let Some(i) = costs.iter().position(|c| !c.is_finite()) {
        return Err(Error::InvalidInput(format!("cost at index {i} is not finite ({})", costs[i])));
    }
    let max = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(costs.iter().map(|&c| max - c).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    capacity: usize,
}

impl Population {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidInput("population capacity must be positive".into()));
        }
        Ok(Self { members: Vec::new(), capacity })
    }

    pub fn with_members(capacity: usize, members: Vec<Individual>) -> Result<Self> {
        let mut pop = Self::new(capacity)?;
        pop.members = members;
        Ok(pop)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, individual: Individual) {
        self.members.push(individual);
    }

    pub fn extend<I: IntoIterator<Item = Individual>>(&mut self, iter: I) {
        self.members.extend(iter);
    }

    /// Lowest-cost member; the earliest one on ties.
    pub fn best(&self) -> Option<&Individual> {
        self.members.iter().reduce(|best, m| if m.cost < best.cost { m } else { best })
    }

    /// Recomputes every member's fitness from the current cost set.
    pub fn refresh_fitness(&mut self) -> Result<()> {
        if self.members.is_empty() {
            return Ok(());
        }
        let costs: Vec<f64> = self.members.iter().map(|m| m.cost).collect();
        let fitness = compute_fitnesses(&costs)?;
        for (m, f) in self.members.iter_mut().zip(fitness) {
            m.fitness = f;
        }
        Ok(())
    }

    /// Keeps the `capacity` lowest-cost members, sorted ascending by cost.
    /// Equal costs keep their insertion order.
    pub fn trim(&mut self) {
        self.members.sort_by(|a, b| a.cost.total_cmp(&b.cost));
        self.members.truncate(self.capacity);
    }
}

/// Free-function form of [`Population::trim`].
pub fn trim_population(mut pop: Population) -> Population {
    pop.trim();
    pop
}
