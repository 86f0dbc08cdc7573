//! The twenty benchmark landscapes F1-F20: unimodal (F1-F6), multimodal
//! (F7-F11), rotated (F12-F16) and shifted-rotated (F17-F20).
//!
//! Printed formulas with obvious transcription slips are implemented in the
//! standard form that reaches the listed optimum (Rosenbrock, Beale,
//! Griewank's `+ 1`, Ackley's additive cosine term, squared Schaffer sine,
//! Schwefel's `[-500, 500]` range). Easom is measured against its true
//! minimum of -1 at `(pi, pi)`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};
use core::fmt;
use core::str::FromStr;

use crate::budget::Objective;
use crate::domain::SearchDomain;
use crate::linalg::{make_rotation, RotationMatrix};
use crate::random::{mix64, RandomSource};
use crate::{Error, Result};

pub const SCHWEFEL_CONSTANT: f64 = 418.9829;
pub const SCHWEFEL_OPTIMUM: f64 = 420.9687;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
    F11,
    F12,
    F13,
    F14,
    F15,
    F16,
    F17,
    F18,
    F19,
    F20,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionGroup {
    Unimodal,
    Multimodal,
    Rotated,
    ShiftedRotated,
}

impl FunctionGroup {
    pub fn label(self) -> &'static str {
        match self {
            FunctionGroup::Unimodal => "Unimodal",
            FunctionGroup::Multimodal => "Multimodal",
            FunctionGroup::Rotated | FunctionGroup::ShiftedRotated => "Robustness Evaluator",
        }
    }
}

/// How a rotated landscape maps `x` to `z = R · (scale · (x - shift))`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Transform {
    scale: f64,
    shifted: bool,
}

impl FunctionId {
    pub const ALL: [FunctionId; 20] = [
        Self::F1,
        Self::F2,
        Self::F3,
        Self::F4,
        Self::F5,
        Self::F6,
        Self::F7,
        Self::F8,
        Self::F9,
        Self::F10,
        Self::F11,
        Self::F12,
        Self::F13,
        Self::F14,
        Self::F15,
        Self::F16,
        Self::F17,
        Self::F18,
        Self::F19,
        Self::F20,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::F1 => "Rosenbrock",
            Self::F2 => "Sphere",
            Self::F3 => "Dixon Price",
            Self::F4 => "Beale",
            Self::F5 => "Easom",
            Self::F6 => "Quartic",
            Self::F7 => "Schwefel",
            Self::F8 => "Weierstrass",
            Self::F9 => "Rastrigin",
            Self::F10 => "Ackley",
            Self::F11 => "Griewank",
            Self::F12 => "Rotated Ackley",
            Self::F13 => "Rotated Rastrigin",
            Self::F14 => "Rotated Schwefel",
            Self::F15 => "Rotated Griewank",
            Self::F16 => "Rotated Weierstrass",
            Self::F17 => "Rotate Shift Expand Scaffer",
            Self::F18 => "Rotate Shift Griewank",
            Self::F19 => "Rotate Shift Rastrigin",
            Self::F20 => "Rotate Shift Ackley",
        }
    }

    pub fn group(self) -> FunctionGroup {
        match self.number() {
            1..=6 => FunctionGroup::Unimodal,
            7..=11 => FunctionGroup::Multimodal,
            12..=16 => FunctionGroup::Rotated,
            _ => FunctionGroup::ShiftedRotated,
        }
    }

    /// Per-axis search range.
    pub fn range(self) -> (f64, f64) {
        match self {
            Self::F1 | Self::F5 | Self::F17 => (-100.0, 100.0),
            Self::F2 | Self::F9 | Self::F13 | Self::F19 => (-5.12, 5.12),
            Self::F3 => (-10.0, 10.0),
            Self::F4 => (-4.5, 4.5),
            Self::F6 => (-1.28, 1.28),
            Self::F7 | Self::F14 => (-500.0, 500.0),
            Self::F8 | Self::F16 => (-0.5, 0.5),
            Self::F10 | Self::F12 | Self::F20 => (-32.768, 32.768),
            Self::F11 | Self::F15 | Self::F18 => (-600.0, 600.0),
        }
    }

    /// Functions defined for one dimension only.
    pub fn fixed_dimension(self) -> Option<usize> {
        match self {
            Self::F4 | Self::F5 => Some(2),
            _ => None,
        }
    }

    pub fn min_dimension(self) -> usize {
        match self {
            Self::F1 | Self::F4 | Self::F5 => 2,
            _ => 1,
        }
    }

    /// The dimension a request maps to: fixed-dimension functions ignore it.
    pub fn resolve_dimension(self, requested: usize) -> usize {
        self.fixed_dimension().unwrap_or(requested)
    }

    pub fn is_rotated(self) -> bool {
        self.number() >= 12
    }

    fn transform(self) -> Option<Transform> {
        let t = |scale, shifted| Some(Transform { scale, shifted });
        match self {
            Self::F12 => t(1.0, false),
            Self::F13 => t(0.0512, false),
            Self::F14 | Self::F15 => t(6.0, false),
            Self::F16 => t(0.005, false),
            Self::F17 | Self::F19 | Self::F20 => t(1.0, true),
            Self::F18 => t(6.0, true),
            _ => None,
        }
    }

    pub fn is_shifted(self) -> bool {
        self.transform().is_some_and(|t| t.shifted)
    }

    /// The objective value at the global minimum, before any bias.
    pub fn base_optimum_value(self) -> f64 {
        match self {
            Self::F5 => -1.0,
            _ => 0.0,
        }
    }

    /// Base function without rotation, scale or shift.
    pub fn base_value(self, z: &[f64]) -> f64 {
        match self {
            Self::F1 => rosenbrock(z),
            Self::F2 => sphere(z),
            Self::F3 => dixon_price(z),
            Self::F4 => beale(z),
            Self::F5 => easom(z),
            Self::F6 => quartic(z),
            Self::F7 | Self::F14 => schwefel(z),
            Self::F8 | Self::F16 => weierstrass(z),
            Self::F9 | Self::F13 | Self::F19 => rastrigin(z),
            Self::F10 | Self::F12 | Self::F20 => ackley(z),
            Self::F11 | Self::F15 | Self::F18 => griewank(z),
            Self::F17 => expanded_scaffer(z),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.number())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix('F').or_else(|| s.strip_prefix('f')).unwrap_or(s);
        digits
            .parse::<usize>()
            .ok()
            .filter(|n| (1..=20).contains(n))
            .map(|n| Self::ALL[n - 1])
            .ok_or_else(|| Error::Config(format!("unknown benchmark function '{s}' (expected F1..F20)")))
    }
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * sq(w[1] - w[0] * w[0]) + sq(w[0] - 1.0))
        .sum()
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn dixon_price(x: &[f64]) -> f64 {
    let head = sq(x[0] - 1.0);
    head + x
        .windows(2)
        .enumerate()
        .map(|(k, w)| (k + 2) as f64 * sq(2.0 * w[1] * w[1] - w[0]))
        .sum::<f64>()
}

pub fn beale(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    sq(1.5 - a + a * b) + sq(2.25 - a + a * b * b) + sq(2.625 - a + a * b * b * b)
}

pub fn easom(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    -libm::cos(a) * libm::cos(b) * libm::exp(-sq(a - PI) - sq(b - PI))
}

pub fn quartic(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * sq(sq(*v))).sum()
}

pub fn schwefel(x: &[f64]) -> f64 {
    SCHWEFEL_CONSTANT * x.len() as f64
        - x.iter().map(|&v| v * libm::sin(libm::sqrt(libm::fabs(v)))).sum::<f64>()
}

const WEIERSTRASS_A: f64 = 0.5;
const WEIERSTRASS_B: f64 = 3.0;
const WEIERSTRASS_K_MAX: usize = 20;

pub fn weierstrass(x: &[f64]) -> f64 {
    let terms = || {
        (0..=WEIERSTRASS_K_MAX).map(|k| {
            (libm::pow(WEIERSTRASS_A, k as f64), libm::pow(WEIERSTRASS_B, k as f64))
        })
    };
    let sum: f64 = x
        .iter()
        .map(|&v| terms().map(|(ak, bk)| ak * libm::cos(2.0 * PI * bk * (v + 0.5))).sum::<f64>())
        .sum();
    let offset: f64 = terms().map(|(ak, bk)| ak * libm::cos(2.0 * PI * bk * 0.5)).sum();
    sum - x.len() as f64 * offset
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter().map(|&v| v * v - 10.0 * libm::cos(2.0 * PI * v) + 10.0).sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    let (a, b, c) = (20.0, 0.2, 2.0 * PI);
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|&v| libm::cos(c * v)).sum::<f64>() / n;
    -a * libm::exp(-b * libm::sqrt(sq)) - libm::exp(cs) + a + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, &v)| libm::cos(v / libm::sqrt((i + 1) as f64)))
        .product();
    sum - prod + 1.0
}

fn scaffer_pair(u: f64, y: f64) -> f64 {
    let r2 = u * u + y * y;
    let s = libm::sin(libm::sqrt(r2));
    (s * s - 0.5) / sq(1.0 + 0.001 * r2) + 0.5
}

/// Schaffer's F6 summed over consecutive coordinate pairs, wrapping around.
pub fn expanded_scaffer(x: &[f64]) -> f64 {
    let d = x.len();
    (0..d).map(|i| scaffer_pair(x[i], x[(i + 1) % d])).sum()
}

/// The rotation and shift that define a rotated landscape.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub rotation: RotationMatrix,
    /// `x_opt`; all zeros for the unshifted rotated group.
    pub shift: Vec<f64>,
}

/// Seed for the landscape of `(id, dimension, seed)`.
pub fn landscape_seed(id: FunctionId, dimension: usize, seed: u64) -> u64 {
    mix64(seed ^ mix64(((id.number() as u64) << 32) | dimension as u64))
}

/// Fresh landscape for `(id, dimension, seed)`: a seeded rotation, and for
/// the shifted group a shift point uniform in the central 80% of the range.
pub fn generate_landscape(id: FunctionId, dimension: usize, seed: u64) -> Result<Landscape> {
    let key = landscape_seed(id, dimension, seed);
    let rotation = make_rotation(dimension, key)?;
    let shift = if id.is_shifted() {
        let (lo, hi) = id.range();
        let mut rng = RandomSource::new(mix64(key ^ 0x5EED_5EED));
        (0..dimension).map(|_| lo + (hi - lo) * (0.1 + 0.8 * rng.unit_closed())).collect()
    } else {
        alloc::vec![0.0; dimension]
    };
    Ok(Landscape { rotation, shift })
}

/// A benchmark instance bound to a dimension and, for F12-F20, a landscape.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    id: FunctionId,
    domain: SearchDomain,
    landscape: Option<Landscape>,
    bias: f64,
}

impl Benchmark {
    /// Builds the instance, generating the landscape from `landscape_seed`
    /// for rotated functions.
    pub fn new(id: FunctionId, dimension: usize, landscape_seed: u64) -> Result<Self> {
        let landscape = if id.is_rotated() {
            Self::check_dimension(id, dimension)?;
            Some(generate_landscape(id, dimension, landscape_seed)?)
        } else {
            None
        };
        Self::build(id, dimension, landscape)
    }

    /// Builds the instance from a stored landscape (ignored for F1-F11).
    pub fn with_landscape(id: FunctionId, dimension: usize, landscape: Option<Landscape>) -> Result<Self> {
        let landscape = if id.is_rotated() {
            let l = landscape
                .ok_or_else(|| Error::InvalidInput(format!("{id} needs a rotation landscape")))?;
            if l.rotation.dimension() != dimension || l.shift.len() != dimension {
                return Err(Error::InvalidInput(format!(
                    "landscape dimension {} does not match {dimension}",
                    l.rotation.dimension()
                )));
            }
            Some(l)
        } else {
            None
        };
        Self::build(id, dimension, landscape)
    }

    fn check_dimension(id: FunctionId, dimension: usize) -> Result<()> {
        if let Some(fixed) = id.fixed_dimension() {
            if dimension != fixed {
                return Err(Error::InvalidInput(format!("{id} is defined for dimension {fixed} only")));
            }
        }
        if dimension < id.min_dimension() {
            return Err(Error::InvalidInput(format!(
                "{id} needs dimension >= {}, got {dimension}",
                id.min_dimension()
            )));
        }
        Ok(())
    }

    fn build(id: FunctionId, dimension: usize, landscape: Option<Landscape>) -> Result<Self> {
        Self::check_dimension(id, dimension)?;
        let (lo, hi) = id.range();
        Ok(Self { id, domain: SearchDomain::cube(dimension, lo, hi)?, landscape, bias: 0.0 })
    }

    /// Adds a constant `f_opt` to a rotated function's value.
    pub fn with_bias(mut self, bias: f64) -> Self {
        if self.id.is_rotated() {
            self.bias = bias;
        }
        self
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn domain(&self) -> &SearchDomain {
        &self.domain
    }

    pub fn landscape(&self) -> Option<&Landscape> {
        self.landscape.as_ref()
    }

    fn to_z(&self, x: &[f64]) -> Vec<f64> {
        match (&self.landscape, self.id.transform()) {
            (Some(l), Some(t)) => {
                let scaled: Vec<f64> = x.iter().zip(&l.shift).map(|(v, o)| t.scale * (v - o)).collect();
                l.rotation.apply(&scaled)
            }
            _ => x.to_vec(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension());
        self.id.base_value(&self.to_z(x)) + self.bias
    }

    pub fn optimum_value(&self) -> f64 {
        self.id.base_optimum_value() + self.bias
    }

    /// A point attaining [`optimum_value`](Self::optimum_value).
    pub fn optimum_point(&self) -> Vec<f64> {
        let d = self.dimension();
        match self.id {
            FunctionId::F1 => alloc::vec![1.0; d],
            FunctionId::F3 => (1..=d)
                .map(|i| {
                    let p = libm::pow(2.0, i as f64);
                    libm::pow(2.0, -(p - 2.0) / p)
                })
                .collect(),
            FunctionId::F4 => alloc::vec![3.0, 0.5],
            FunctionId::F5 => alloc::vec![PI, PI],
            FunctionId::F7 => alloc::vec![SCHWEFEL_OPTIMUM; d],
            FunctionId::F14 => {
                let l = self.landscape.as_ref().expect("rotated benchmark has a landscape");
                l.rotation
                    .apply_transpose(&alloc::vec![SCHWEFEL_OPTIMUM; d])
                    .into_iter()
                    .map(|v| v / 6.0)
                    .collect()
            }
            id if id.is_rotated() => self.landscape.as_ref().expect("landscape").shift.clone(),
            _ => alloc::vec![0.0; d],
        }
    }

    /// `|cost - optimum|`
    pub fn error_of(&self, cost: f64) -> f64 {
        libm::fabs(cost - self.optimum_value())
    }

}

impl Objective for Benchmark {
    fn cost(&self, x: &[f64]) -> f64 {
        self.evaluate(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn literal_optima() {
        assert_eq!(sphere(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(rosenbrock(&[1.0, 1.0]), 0.0);
        assert_eq!(beale(&[3.0, 0.5]), 0.0);
        assert_eq!(sphere(&[1.0, 2.0]), 5.0);
        assert_eq!(rastrigin(&[0.0; 5]), 0.0);
        assert!(schwefel(&[SCHWEFEL_OPTIMUM; 3]).abs() <= 1e-4);
        assert!(ackley(&[0.0; 4]).abs() <= 1e-12);
        assert!((easom(&[PI, PI]) + 1.0).abs() <= 1e-12);
        assert!(griewank(&[0.0; 3]).abs() <= 1e-12);
        assert!(weierstrass(&[0.0; 3]).abs() <= 1e-9);
        assert!(expanded_scaffer(&[0.0; 3]).abs() <= 1e-12);
        assert_eq!(quartic(&[0.0; 3]), 0.0);
    }

    #[test]
    fn dixon_price_closed_form_optimum() {
        for d in 1..=10 {
            let b = Benchmark::new(FunctionId::F3, d, 0).unwrap();
            assert!(b.evaluate(&b.optimum_point()).abs() <= 1e-9, "d={d}");
        }
    }

    #[test]
    fn rotated_at_shift_point_is_bias() {
        let b = Benchmark::new(FunctionId::F13, 3, 4).unwrap().with_bias(-330.0);
        let x = b.optimum_point();
        assert!((b.evaluate(&x) + 330.0).abs() < 1e-9);
        assert_eq!(b.optimum_value(), -330.0);
    }

    #[test]
    fn shifted_points_in_central_band() {
        for id in [FunctionId::F17, FunctionId::F18, FunctionId::F19, FunctionId::F20] {
            let b = Benchmark::new(id, 10, 1).unwrap();
            let (lo, hi) = id.range();
            for v in b.optimum_point() {
                assert!(v >= lo + 0.1 * (hi - lo) - 1e-12 && v <= hi - 0.1 * (hi - lo) + 1e-12);
            }
        }
    }

    #[test]
    fn ids_parse() {
        assert_eq!("F7".parse::<FunctionId>().unwrap(), FunctionId::F7);
        assert_eq!("f20".parse::<FunctionId>().unwrap(), FunctionId::F20);
        assert!(matches!("F21".parse::<FunctionId>(), Err(Error::Config(_))));
        assert!("Rastrigin".parse::<FunctionId>().is_err());
        for id in FunctionId::ALL {
            assert_eq!(alloc::format!("{id}").parse::<FunctionId>().unwrap(), id);
        }
    }

    #[test]
    fn fixed_dimension_enforced() {
        assert!(Benchmark::new(FunctionId::F4, 3, 0).is_err());
        assert!(Benchmark::new(FunctionId::F1, 1, 0).is_err());
        assert_eq!(FunctionId::F5.resolve_dimension(30), 2);
        assert_eq!(FunctionId::F9.resolve_dimension(30), 30);
    }

    #[test]
    fn sphere_positive_off_origin() {
        let mut rng = RandomSource::new(2);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..3).map(|_| rng.uniform(-5.12, 5.12)).collect();
            assert!(sphere(&x) > 0.0);
        }
    }

    #[test]
    fn landscapes_are_keyed() {
        let a = generate_landscape(FunctionId::F19, 5, 7).unwrap();
        assert_eq!(a, generate_landscape(FunctionId::F19, 5, 7).unwrap());
        assert_ne!(a, generate_landscape(FunctionId::F20, 5, 7).unwrap());
        assert_ne!(a, generate_landscape(FunctionId::F19, 5, 8).unwrap());
    }

    #[test]
    fn with_landscape_checks_dimension() {
        let l = generate_landscape(FunctionId::F12, 3, 0).unwrap();
        assert!(Benchmark::with_landscape(FunctionId::F12, 4, Some(l.clone())).is_err());
        assert!(Benchmark::with_landscape(FunctionId::F12, 3, None).is_err());
        assert!(Benchmark::with_landscape(FunctionId::F12, 3, Some(l)).is_ok());
        assert!(Benchmark::with_landscape(FunctionId::F2, 3, None).is_ok());
    }

    #[test]
    fn pure_evaluation() {
        let b = Benchmark::new(FunctionId::F17, 4, 3).unwrap();
        let x = vec![1.0, -2.0, 3.5, 0.25];
        assert_eq!(b.evaluate(&x).to_bits(), b.evaluate(&x).to_bits());
    }
}

fn sq(x: f64) -> f64 {
    x * x
}
