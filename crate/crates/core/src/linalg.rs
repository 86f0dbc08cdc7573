//! Seeded random rotations for the rotated benchmark landscapes.

use alloc::format;
use alloc::vec::Vec;

use crate::random::RandomSource;
use crate::{Error, Result};

/// A square orthogonal matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix {
    dimension: usize,
    entries: Vec<f64>,
    seed: u64,
}

impl RotationMatrix {
    pub fn identity(dimension: usize) -> Self {
        let mut entries = alloc::vec![0.0; dimension * dimension];
        for i in 0..dimension {
            entries[i * dimension + i] = 1.0;
        }
        Self { dimension, entries, seed: 0 }
    }

    /// Wraps stored entries. Fails if the matrix is not orthogonal to 1e-10.
    pub fn from_rows(rows: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput("rotation matrix must be square and nonempty".into()));
        }
        let m = Self { dimension: d, entries: rows.into_iter().flatten().collect(), seed };
        let err = m.orthogonality_error();
        if !(err <= 1e-10) {
            return Err(Error::InvalidInput(format!("matrix is not orthogonal (|RᵀR - I|∞ = {err:e})")));
        }
        Ok(m)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dimension + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.dimension..(row + 1) * self.dimension]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.dimension)
    }

    /// `R · v`
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.rows().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `Rᵀ · v`, which is `R⁻¹ · v` for an orthogonal matrix.
    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dimension;
        let mut out = alloc::vec![0.0; d];
        for (i, r) in self.rows().enumerate() {
            for j in 0..d {
                out[j] += r[j] * v[i];
            }
        }
        out
    }

    /// `max |(RᵀR - I)_ij|`
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dimension;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(libm::fabs(dot - target));
            }
        }
        worst
    }
}

/// Orthonormalizes a seeded standard-normal matrix column by column
/// (modified Gram-Schmidt, two passes).
pub fn make_rotation(dimension: usize, seed: u64) -> Result<RotationMatrix> {
    if dimension == 0 {
        return Err(Error::InvalidInput("rotation dimension must be at least 1".into()));
    }
    let d = dimension;
    let mut rng = RandomSource::new(seed);
    loop {
        let mut cols: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.normal()).collect()).collect();
        if orthonormalize(&mut cols) {
            let mut entries = alloc::vec![0.0; d * d];
            for (j, col) in cols.iter().enumerate() {
                for (i, v) in col.iter().enumerate() {
                    entries[i * d + j] = *v;
                }
            }
            return Ok(RotationMatrix { dimension: d, entries, seed });
        }
    }
}

/// `false` if the columns are numerically dependent.
fn orthonormalize(cols: &mut [Vec<f64>]) -> bool {
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let v = &mut rest[0];
                let proj: f64 = q.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = libm::sqrt(cols[j].iter().map(|x| x * x).sum());
        if !(norm > 1e-8) {
            return false;
        }
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Determinant by Gaussian elimination with partial pivoting.
    fn det(m: &RotationMatrix) -> f64 {
        let d = m.dimension();
        let mut a: Vec<Vec<f64>> = m.rows().map(|r| r.to_vec()).collect();
        let mut det = 1.0;
        for c in 0..d {
            let p = (c..d).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c];
            for r in c + 1..d {
                let f = a[r][c] / a[c][c];
                for k in c..d {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        det
    }

    #[test]
    fn one_dimensional_is_sign() {
        let r = make_rotation(1, 5).unwrap();
        assert_eq!(r.get(0, 0).abs(), 1.0);
    }

    #[test]
    fn orthogonal_with_unit_determinant() {
        for d in [2, 3, 10, 30] {
            for seed in 0..5 {
                let r = make_rotation(d, seed).unwrap();
                assert!(r.orthogonality_error() <= 1e-10, "d={d} seed={seed}");
                assert!((det(&r).abs() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(make_rotation(7, 99).unwrap(), make_rotation(7, 99).unwrap());
        assert_ne!(make_rotation(7, 99).unwrap(), make_rotation(7, 100).unwrap());
    }

    #[test]
    fn preserves_norms_and_inverts() {
        let r = make_rotation(10, 3).unwrap();
        let mut rng = RandomSource::new(1);
        for _ in 0..100 {
            let v: Vec<f64> = (0..10).map(|_| rng.uniform(-100.0, 100.0)).collect();
            let n0: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let rv = r.apply(&v);
            let n1: f64 = rv.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n0 - n1).abs() <= 1e-10 * n0.max(1.0));
            let back = r.apply_transpose(&rv);
            for (a, b) in back.iter().zip(&v) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn from_rows_checks_orthogonality() {
        assert!(RotationMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]], 0).is_ok());
        assert!(RotationMatrix::from_rows(vec![vec![1.0, 0.1], vec![0.0, 1.0]], 0).is_err());
        assert!(RotationMatrix::from_rows(vec![vec![1.0]], 0).is_ok());
        assert!(RotationMatrix::from_rows(vec![vec![1.0, 0.0]], 0).is_err());
    }
}
