//! Axis-aligned search boxes and the unit-cube normalization used by hulls.

use alloc::format;
use alloc::vec::Vec;

use crate::random::RandomSource;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidInput("domain dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidInput(format!(
                "bound lengths differ: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidInput(format!(
                    "axis {i}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same `[lo, hi]` interval on every axis.
    pub fn cube(dimension: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; dimension], alloc::vec![hi; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dimension()
            && position
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Each coordinate independently uniform in its axis interval.
    pub fn sample_uniform(&self, rng: &mut RandomSource) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| rng.uniform(lo, hi))
            .collect()
    }

    /// Clips every coordinate into the box.
    pub fn clamp(&self, position: &[f64]) -> Vec<f64> {
        debug_assert_eq!(position.len(), self.dimension());
        position
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&x, (&lo, &hi))| x.clamp(lo, hi))
            .collect()
    }

    /// Maps domain coordinates onto the unit cube.
    pub fn normalize(&self, position: &[f64]) -> Vec<f64> {
        position
            .iter()
            .enumerate()
            .map(|(i, &x)| (x - self.lower[i]) / self.width(i))
            .collect()
    }

    /// Inverse of [`normalize`](Self::normalize).
    pub fn denormalize(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .enumerate()
            .map(|(i, &u)| self.lower[i] + u * self.width(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_bounds() {
        assert!(SearchDomain::new(vec![], vec![]).is_err());
        assert!(SearchDomain::new(vec![0.0], vec![0.0]).is_err());
        assert!(SearchDomain::new(vec![1.0, 0.0], vec![2.0, -1.0]).is_err());
        assert!(SearchDomain::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(SearchDomain::new(vec![f64::NEG_INFINITY], vec![0.0]).is_err());
    }

    #[test]
    fn clamp_examples() {
        let d = SearchDomain::cube(2, -5.12, 5.12).unwrap();
        assert_eq!(d.clamp(&[6.0, 0.0]), vec![5.12, 0.0]);
        let d = SearchDomain::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(d.clamp(&[0.3, 0.3]), vec![0.3, 0.3]);
        let d = SearchDomain::cube(2, -1.0, 1.0).unwrap();
        assert_eq!(d.clamp(&[-10.0, 10.0]), vec![-1.0, 1.0]);
    }

    #[test]
    fn samples_stay_in_box() {
        let mut rng = RandomSource::new(3);
        let unit = SearchDomain::cube(3, 0.0, 1.0).unwrap();
        let rast = SearchDomain::cube(2, -5.12, 5.12).unwrap();
        for _ in 0..1000 {
            assert!(unit.contains(&unit.sample_uniform(&mut rng)));
            assert!(rast.contains(&rast.sample_uniform(&mut rng)));
        }
    }

    #[test]
    fn sample_mean_is_half() {
        let mut rng = RandomSource::new(11);
        let d = SearchDomain::cube(1, 0.0, 1.0).unwrap();
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| d.sample_uniform(&mut rng)[0]).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() <= 0.01, "mean {mean}");
    }

    #[test]
    fn normalization_round_trips() {
        let d = SearchDomain::new(vec![-600.0, 0.0], vec![600.0, 2.0]).unwrap();
        let x = [150.0, 1.5];
        let u = d.normalize(&x);
        assert_eq!(u, vec![0.625, 0.75]);
        let back = d.denormalize(&u);
        assert!((back[0] - 150.0).abs() < 1e-12 && (back[1] - 1.5).abs() < 1e-12);
    }
}
