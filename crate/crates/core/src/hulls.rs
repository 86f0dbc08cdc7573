//! Random convex regions (spheres and ellipsoids) in unit-cube coordinates.
//!
//! Radii are dimensionless so a single configuration applies to domains of
//! any width; positions are normalized before any membership test.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::domain::SearchDomain;
use crate::population::Population;
use crate::random::RandomSource;
use crate::{Error, Result};

/// Rejection attempts before [`sample_in_hull`] gives up.
pub const MAX_SAMPLE_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum HullKind {
    #[default]
    Sphere,
    Ellipsoid,
}

impl HullKind {
    pub const ALL: [HullKind; 2] = [HullKind::Sphere, HullKind::Ellipsoid];

    pub fn tag(self) -> &'static str {
        match self {
            HullKind::Sphere => "Sphere",
            HullKind::Ellipsoid => "Ellipsoid",
        }
    }
}

impl fmt::Display for HullKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for HullKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("sphere") {
            Ok(HullKind::Sphere)
        } else if s.eq_ignore_ascii_case("ellipsoid") {
            Ok(HullKind::Ellipsoid)
        } else {
            Err(Error::Config(format!("unknown hull type '{s}' (expected Sphere or Ellipsoid)")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereHull {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Points whose distances to the two foci sum to at most `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidHull {
    pub focus_a: Vec<f64>,
    pub focus_b: Vec<f64>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Hull {
    Sphere(SphereHull),
    Ellipsoid(EllipsoidHull),
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

impl Hull {
    pub fn sphere(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("sphere radius must be positive, got {radius}")));
        }
        if center.is_empty() {
            return Err(Error::InvalidInput("sphere center is empty".into()));
        }
        Ok(Hull::Sphere(SphereHull { center, radius }))
    }

    pub fn ellipsoid(focus_a: Vec<f64>, focus_b: Vec<f64>, threshold: f64) -> Result<Self> {
        if focus_a.len() != focus_b.len() || focus_a.is_empty() {
            return Err(Error::InvalidInput("ellipsoid foci must share a nonzero dimension".into()));
        }
        let sep = distance(&focus_a, &focus_b);
        if !(threshold > sep && threshold.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "ellipsoid threshold {threshold} must exceed focal separation {sep}"
            )));
        }
        Ok(Hull::Ellipsoid(EllipsoidHull { focus_a, focus_b, threshold }))
    }

    pub fn kind(&self) -> HullKind {
        match self {
            Hull::Sphere(_) => HullKind::Sphere,
            Hull::Ellipsoid(_) => HullKind::Ellipsoid,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Hull::Sphere(s) => s.center.len(),
            Hull::Ellipsoid(e) => e.focus_a.len(),
        }
    }

    /// Boundary-inclusive membership for a normalized position.
    pub fn contains(&self, position: &[f64]) -> Result<bool> {
        if position.len() != self.dimension() {
            return Err(Error::InvalidInput(format!(
                "position has dimension {}, hull has {}",
                position.len(),
                self.dimension()
            )));
        }
        Ok(self.contains_unchecked(position))
    }

    fn contains_unchecked(&self, position: &[f64]) -> bool {
        match self {
            Hull::Sphere(s) => distance(position, &s.center) <= s.radius,
            Hull::Ellipsoid(e) => {
                distance(position, &e.focus_a) + distance(position, &e.focus_b) <= e.threshold
            }
        }
    }

    /// `radius^d` for spheres, `(threshold / 2)^d` for ellipsoids.
    ///
    /// The unit-ball constant is omitted; it is common to every hull of the
    /// same kind and dimension.
    pub fn volume_proxy(&self, dimension: usize) -> f64 {
        let scale = match self {
            Hull::Sphere(s) => s.radius,
            Hull::Ellipsoid(e) => e.threshold / 2.0,
        };
        libm::pow(scale, dimension as f64)
    }

    /// A point uniform over the hull itself, ignoring the unit cube.
    pub fn sample_unbounded(&self, rng: &mut RandomSource) -> Vec<f64> {
        let d = self.dimension();
        let ball = unit_ball_point(d, rng);
        match self {
            Hull::Sphere(s) => s.center.iter().zip(&ball).map(|(c, y)| c + s.radius * y).collect(),
            Hull::Ellipsoid(e) => {
                let sep = distance(&e.focus_a, &e.focus_b);
                let major = e.threshold / 2.0;
                let minor = libm::sqrt(major * major - sep * sep / 4.0);
                let center: Vec<f64> =
                    e.focus_a.iter().zip(&e.focus_b).map(|(a, b)| 0.5 * (a + b)).collect();
                if sep == 0.0 {
                    return center.iter().zip(&ball).map(|(c, y)| c + major * y).collect();
                }
                let axis: Vec<f64> =
                    e.focus_a.iter().zip(&e.focus_b).map(|(a, b)| (b - a) / sep).collect();
                let along: f64 = ball.iter().zip(&axis).map(|(y, u)| y * u).sum();
                center
                    .iter()
                    .zip(ball.iter().zip(&axis))
                    .map(|(c, (y, u))| c + major * along * u + minor * (y - along * u))
                    .collect()
            }
        }
    }
}

/// Uniform point in the unit `d`-ball: Gaussian direction, radius `U^(1/d)`.
fn unit_ball_point(d: usize, rng: &mut RandomSource) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
        let norm = libm::sqrt(g.iter().map(|v| v * v).sum());
        if norm > 0.0 {
            let r = libm::pow(rng.unit(), 1.0 / d as f64);
            return g.into_iter().map(|v| v * r / norm).collect();
        }
    }
}

/// `count` random hulls of `kind` in the `dimension`-dimensional unit cube.
///
/// Spheres: uniform centers, radii uniform in `[radius_min, radius_max]`.
/// Ellipsoids: a uniform first focus, the second at a uniform separation
/// below `radius_max` along a random direction, threshold uniform in
/// `(separation, separation + radius_max]`.
pub fn generate_hulls(
    count: usize,
    kind: HullKind,
    dimension: usize,
    radius_min: f64,
    radius_max: f64,
    rng: &mut RandomSource,
) -> Result<Vec<Hull>> {
    validate_radius_range(radius_min, radius_max)?;
    if count == 0 {
        return Err(Error::Config("hull count must be at least 1".into()));
    }
    if dimension == 0 {
        return Err(Error::InvalidInput("hull dimension must be at least 1".into()));
    }
    let mut hulls = Vec::with_capacity(count);
    for _ in 0..count {
        let hull = match kind {
            HullKind::Sphere => {
                let center = (0..dimension).map(|_| rng.unit_closed()).collect();
                let radius = rng.uniform(radius_min, radius_max);
                Hull::Sphere(SphereHull { center, radius })
            }
            HullKind::Ellipsoid => {
                let focus_a: Vec<f64> = (0..dimension).map(|_| rng.unit_closed()).collect();
                let dir = unit_ball_direction(dimension, rng);
                let sep = radius_max * rng.unit();
                let focus_b = focus_a.iter().zip(&dir).map(|(a, u)| a + sep * u).collect();
                // (sep, sep + radius_max]
                let threshold = sep + radius_max * (1.0 - rng.unit());
                Hull::Ellipsoid(EllipsoidHull { focus_a, focus_b, threshold })
            }
        };
        hulls.push(hull);
    }
    Ok(hulls)
}

fn unit_ball_direction(d: usize, rng: &mut RandomSource) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
        let norm = libm::sqrt(g.iter().map(|v| v * v).sum());
        if norm > 0.0 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

pub fn validate_radius_range(radius_min: f64, radius_max: f64) -> Result<()> {
    if radius_min > 0.0 && radius_min <= radius_max && radius_max <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "radius range must satisfy 0 < min <= max <= 1, got [{radius_min}, {radius_max}]"
        )))
    }
}

/// Indices of the normalized positions lying in `hull`, in input order.
pub fn members_of(hull: &Hull, normalized: &[Vec<f64>]) -> Vec<usize> {
    normalized
        .iter()
        .enumerate()
        .filter(|(_, p)| p.len() == hull.dimension() && hull.contains_unchecked(p))
        .map(|(i, _)| i)
        .collect()
}

/// [`members_of`] for a population stored in domain coordinates.
pub fn population_members_of(hull: &Hull, pop: &Population, domain: &SearchDomain) -> Vec<usize> {
    let normalized: Vec<Vec<f64>> =
        pop.members().iter().map(|m| domain.normalize(&m.position)).collect();
    members_of(hull, &normalized)
}

/// Uniform point in `hull ∩ [0, 1]^d`, by rejection against the cube.
pub fn sample_in_hull(hull: &Hull, rng: &mut RandomSource) -> Result<Vec<f64>> {
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let p = hull.sample_unbounded(rng);
        if p.iter().all(|&x| (0.0..=1.0).contains(&x)) {
            return Ok(p);
        }
    }
    Err(Error::DegenerateHull { attempts: MAX_SAMPLE_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn seven_spheres_within_radius_range() {
        let mut rng = RandomSource::new(5);
        let hulls = generate_hulls(7, HullKind::Sphere, 3, 0.2, 0.7, &mut rng).unwrap();
        assert_eq!(hulls.len(), 7);
        for h in hulls {
            let Hull::Sphere(s) = h else { panic!("expected sphere") };
            assert!((0.2..=0.7).contains(&s.radius));
            assert!(s.center.iter().all(|c| (0.0..=1.0).contains(c)));
        }
    }

    #[test]
    fn degenerate_radius_range() {
        let mut rng = RandomSource::new(5);
        let hulls = generate_hulls(1, HullKind::Sphere, 4, 0.5, 0.5, &mut rng).unwrap();
        let Hull::Sphere(s) = &hulls[0] else { panic!() };
        assert_eq!(s.radius, 0.5);
    }

    #[test]
    fn radius_mean_matches_uniform() {
        let mut rng = RandomSource::new(77);
        let hulls = generate_hulls(10_000, HullKind::Sphere, 2, 0.2, 0.7, &mut rng).unwrap();
        let mean = hulls
            .iter()
            .map(|h| match h {
                Hull::Sphere(s) => s.radius,
                _ => unreachable!(),
            })
            .sum::<f64>()
            / 10_000.0;
        assert!((mean - 0.45).abs() <= 0.01, "mean {mean}");
    }

    #[test]
    fn bad_radius_ranges_are_config_errors() {
        let mut rng = RandomSource::new(0);
        for (lo, hi) in [(0.0, 0.5), (0.6, 0.5), (0.2, 1.5), (-0.1, 0.3)] {
            assert!(matches!(
                generate_hulls(3, HullKind::Sphere, 2, lo, hi, &mut rng),
                Err(Error::Config(_))
            ));
        }
    }

    #[test]
    fn ellipsoids_are_non_degenerate() {
        let mut rng = RandomSource::new(8);
        for d in [1, 2, 10, 30] {
            for h in generate_hulls(50, HullKind::Ellipsoid, d, 0.2, 0.7, &mut rng).unwrap() {
                let Hull::Ellipsoid(e) = h else { panic!() };
                let sep = distance(&e.focus_a, &e.focus_b);
                assert!(sep < 0.7);
                assert!(e.threshold > sep && e.threshold <= sep + 0.7 + 1e-12);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let s = Hull::sphere(vec![0.0, 0.0], 1.0).unwrap();
        assert!(s.contains(&[0.5, 0.5]).unwrap());
        assert!(s.contains(&[1.0, 0.0]).unwrap());
        assert!(!s.contains(&[1.0, 0.1]).unwrap());
        let e = Hull::ellipsoid(vec![0.0, 0.0], vec![1.0, 0.0], 1.5).unwrap();
        assert!(e.contains(&[0.5, 0.5]).unwrap());
        assert!(!e.contains(&[0.5, 0.6]).unwrap());
        assert!(matches!(s.contains(&[0.1]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn ellipsoid_needs_threshold_above_separation() {
        assert!(Hull::ellipsoid(vec![0.0, 0.0], vec![1.0, 0.0], 1.0).is_err());
        assert!(Hull::sphere(vec![0.5], 0.0).is_err());
    }

    #[test]
    fn members_whole_cube_and_disjoint() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 9.0, 1.0 - i as f64 / 9.0]).collect();
        let all = Hull::sphere(vec![0.5, 0.5], 2f64.sqrt()).unwrap();
        assert_eq!(members_of(&all, &pts), (0..10).collect::<Vec<_>>());
        let none = Hull::sphere(vec![5.0, 5.0], 0.5).unwrap();
        assert!(members_of(&none, &pts).is_empty());
    }

    #[test]
    fn volume_proxy_examples() {
        assert_eq!(Hull::sphere(vec![0.0; 2], 0.5).unwrap().volume_proxy(2), 0.25);
        for d in [1, 5, 30] {
            assert_eq!(Hull::sphere(vec![0.0; d], 1.0).unwrap().volume_proxy(d), 1.0);
        }
        let e = Hull::ellipsoid(vec![0.0; 3], vec![0.1, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(e.volume_proxy(3), 0.125);
    }

    #[test]
    fn samples_land_inside() {
        let mut rng = RandomSource::new(21);
        let s = Hull::sphere(vec![0.5, 0.5], 0.3).unwrap();
        let corner = Hull::sphere(vec![0.0, 0.0], 0.3).unwrap();
        let e = Hull::ellipsoid(vec![0.3, 0.4, 0.5], vec![0.6, 0.5, 0.4], 0.6).unwrap();
        for _ in 0..2000 {
            for h in [&s, &corner, &e] {
                let p = sample_in_hull(h, &mut rng).unwrap();
                assert!(h.contains(&p).unwrap());
                assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
            }
        }
    }

    #[test]
    fn sample_centroid_matches_center() {
        let mut rng = RandomSource::new(4);
        let h = Hull::sphere(vec![0.5, 0.5], 0.3).unwrap();
        let n = 10_000;
        let mut acc = [0.0; 2];
        for _ in 0..n {
            let p = sample_in_hull(&h, &mut rng).unwrap();
            acc[0] += p[0];
            acc[1] += p[1];
        }
        for a in acc {
            assert!((a / n as f64 - 0.5).abs() <= 0.02);
        }
    }

    #[test]
    fn sample_fails_for_hull_outside_cube() {
        let mut rng = RandomSource::new(4);
        let h = Hull::sphere(vec![3.0, 3.0], 0.2).unwrap();
        assert_eq!(sample_in_hull(&h, &mut rng), Err(Error::DegenerateHull { attempts: 10_000 }));
    }

    #[test]
    fn hull_kind_tags_parse() {
        assert_eq!("sphere".parse::<HullKind>().unwrap(), HullKind::Sphere);
        assert_eq!("Ellipsoid".parse::<HullKind>().unwrap(), HullKind::Ellipsoid);
        assert!("cube".parse::<HullKind>().is_err());
    }

    proptest! {
        #[test]
        fn sphere_volume_increases_with_radius(r in 0.01f64..0.99, dr in 0.001f64..0.5, d in 1usize..30) {
            let small = Hull::sphere(vec![0.0; d], r).unwrap();
            let big = Hull::sphere(vec![0.0; d], r + dr).unwrap();
            prop_assert!(big.volume_proxy(d) > small.volume_proxy(d));
        }

        #[test]
        fn big_sphere_holds_whole_cube(d in 1usize..10, seed in 0u64..1000) {
            let mut rng = RandomSource::new(seed);
            let pts: Vec<Vec<f64>> = (0..20).map(|_| (0..d).map(|_| rng.unit_closed()).collect()).collect();
            let center: Vec<f64> = (0..d).map(|_| rng.unit_closed()).collect();
            let h = Hull::sphere(center, libm::sqrt(d as f64)).unwrap();
            prop_assert_eq!(members_of(&h, &pts).len(), 20);
        }
    }
}
