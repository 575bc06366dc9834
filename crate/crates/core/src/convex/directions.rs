//! Finite sets of exact rational unit vectors standing in for all directions, and the
//! support-function distance they induce.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num::{BigInt, One, Signed};

use super::body::{ConvexBody, Point};
use crate::error::{Error, Result};
use crate::rational::{norm_sq, to_f64};
use crate::Rational;

/// Default angular covering radius in radians.
pub const DEFAULT_COVERING: f64 = 0.2;
/// Denominator used when rounding stereographic coordinates.
const STEREO_DENOM: i64 = 1024;
/// Sample size for measuring the covering radius on the 2-sphere.
const SPHERE_SAMPLE: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    dirs: Vec<Point>,
    covering_radius: f64,
}

fn to_unit_f64(p: &[Rational]) -> Vec<f64> {
    p.iter().map(to_f64).collect()
}

fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

fn rat(x: f64) -> Rational {
    Rational::new(BigInt::from((x * STEREO_DENOM as f64).round() as i64), BigInt::from(STEREO_DENOM))
}

/// Exact unit vector on the circle from the half-angle tangent `t`.
fn circle_point(t: &Rational) -> Point {
    let one = Rational::one();
    let d = &one + t * t;
    vec![(&one - t * t) / &d, (t + t) / &d]
}

/// Exact unit vector on the sphere by inverse stereographic projection from the north pole.
fn sphere_point(u: &Rational, v: &Rational) -> Point {
    let s = u * u + v * v;
    let d = &s + Rational::one();
    vec![(u + u) / &d, (v + v) / &d, (s - Rational::one()) / &d]
}

fn circle_covering(dirs: &[Point]) -> f64 {
    let mut angles: Vec<f64> = dirs
        .iter()
        .map(|p| to_f64(&p[1]).atan2(to_f64(&p[0])))
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut gap: f64 = angles[0] + 2.0 * PI - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap / 2.0
}

fn sphere_covering(dirs: &[Point]) -> f64 {
    let unit: Vec<Vec<f64>> = dirs.iter().map(|p| to_unit_f64(p)).collect();
    fibonacci_sphere(SPHERE_SAMPLE)
        .iter()
        .map(|s| {
            let best = unit
                .iter()
                .map(|d| d[0] * s[0] + d[1] * s[1] + d[2] * s[2])
                .fold(f64::NEG_INFINITY, f64::max);
            best.clamp(-1.0, 1.0).acos()
        })
        .fold(0.0, f64::max)
}

impl DirectionSet {
    /// Directions must be exact unit vectors; the set must positively span.
    pub fn new(dim: usize, dirs: Vec<Point>) -> Result<Self> {
        if !(1..=3).contains(&dim) || dirs.is_empty() {
            return Err(Error::InvalidGraph("direction sets need dimension 1..=3".into()));
        }
        for d in &dirs {
            if d.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: d.len(),
                });
            }
            if !norm_sq(d).is_one() {
                return Err(Error::InvalidGraph("direction is not a unit vector".into()));
            }
        }
        let covering_radius = match dim {
            1 => {
                let pos = dirs.iter().any(|d| d[0].is_positive());
                let neg = dirs.iter().any(|d| d[0].is_negative());
                if pos && neg {
                    0.0
                } else {
                    PI
                }
            }
            2 => circle_covering(&dirs),
            _ => sphere_covering(&dirs),
        };
        if covering_radius >= PI / 2.0 {
            return Err(Error::InvalidGraph("directions do not positively span".into()));
        }
        Ok(DirectionSet {
            dim,
            dirs,
            covering_radius,
        })
    }

    /// A symmetric set containing `±eᵢ` with covering radius at most `radius`.
    pub fn with_covering(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < PI / 2.0) {
            return Err(Error::InvalidGraph(format!("covering radius {radius} out of range")));
        }
        let mut n = 8;
        loop {
            let mut dirs: Vec<Point> = match dim {
                1 => vec![vec![Rational::one()]],
                2 => (0..n)
                    .map(|k| {
                        let theta = k as f64 * PI / n as f64 - PI / 2.0;
                        circle_point(&rat((theta / 2.0).tan()))
                    })
                    .collect(),
                3 => {
                    let mut v: Vec<Point> = fibonacci_sphere(n)
                        .iter()
                        .filter(|p| p[2] < 0.999)
                        .map(|p| sphere_point(&rat(p[0] / (1.0 - p[2])), &rat(p[1] / (1.0 - p[2]))))
                        .collect();
                    for k in 0..3 {
                        let mut e = vec![Rational::from_integer(0.into()); 3];
                        e[k] = Rational::one();
                        v.push(e);
                    }
                    v
                }
                _ => return Err(Error::DimensionMismatch { expected: 3, got: dim }),
            };
            let negated: Vec<Point> = dirs.iter().map(|d| d.iter().map(|x| -x).collect()).collect();
            dirs.extend(negated);
            dirs.sort();
            dirs.dedup();
            let set = DirectionSet::new(dim, dirs)?;
            if set.covering_radius <= radius {
                return Ok(set);
            }
            n += n / 4;
        }
    }

    /// The default set for `dim`, built once per process.
    pub fn default_for(dim: usize) -> Result<Self> {
        static CACHE: [OnceLock<DirectionSet>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        if !(1..=3).contains(&dim) {
            return Err(Error::DimensionMismatch { expected: 3, got: dim });
        }
        if let Some(s) = CACHE[dim - 1].get() {
            return Ok(s.clone());
        }
        let set = Self::with_covering(dim, DEFAULT_COVERING)?;
        Ok(CACHE[dim - 1].get_or_init(|| set).clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Point] {
        &self.dirs
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Largest angle from any unit vector to the nearest member.
    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    /// Largest Euclidean distance from any unit vector to the nearest member.
    pub fn chord_radius(&self) -> f64 {
        2.0 * (self.covering_radius / 2.0).sin()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeDistance {
    /// `max_b |b⁺(A) − b⁺(B)|` over the direction set.
    pub value: Rational,
    /// Index of a maximizing direction.
    pub witness: usize,
    /// Upper bound for the supremum over all unit directions: support functions of bodies
    /// in the unit ball are 1-Lipschitz in `b`.
    pub all_directions_bound: f64,
}

pub fn cone_distance(a: &ConvexBody, b: &ConvexBody, dirs: &DirectionSet) -> Result<ConeDistance> {
    for body in [a, b] {
        if body.dim() != dirs.dim {
            return Err(Error::DimensionMismatch {
                expected: dirs.dim,
                got: body.dim(),
            });
        }
    }
    let mut best = (Rational::from_integer(0.into()), 0);
    for (i, d) in dirs.dirs.iter().enumerate() {
        let gap = (a.support_max(d)? - b.support_max(d)?).abs();
        if gap > best.0 {
            best = (gap, i);
        }
    }
    let bound = to_f64(&best.0) + 2.0 * dirs.chord_radius();
    Ok(ConeDistance {
        value: best.0,
        witness: best.1,
        all_directions_bound: bound,
    })
}

pub fn cone_metric(a: &ConvexBody, b: &ConvexBody, dirs: &DirectionSet) -> Result<Rational> {
    Ok(cone_distance(a, b, dirs)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn default_sets_cover() {
        for dim in 1..=3 {
            let s = DirectionSet::default_for(dim).unwrap();
            assert!(s.covering_radius() <= DEFAULT_COVERING);
            for d in s.directions() {
                assert!(norm_sq(d).is_one());
            }
            for k in 0..dim {
                let mut e = vec![int(0); dim];
                e[k] = int(1);
                assert!(s.directions().contains(&e));
                e[k] = int(-1);
                assert!(s.directions().contains(&e));
            }
        }
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(DirectionSet::new(2, vec![vec![int(1), int(1)]]).is_err());
        assert!(DirectionSet::new(2, vec![vec![int(1), int(0)], vec![int(0), int(1)]]).is_err());
    }

    #[test]
    fn metric_examples() {
        let dirs = DirectionSet::default_for(2).unwrap();
        let zero = ConvexBody::point(vec![int(0), int(0)]).unwrap();
        let t = ratio(3, 7);
        let seg = ConvexBody::segment(vec![int(0), int(0)], vec![t.clone(), int(0)]).unwrap();
        assert_eq!(cone_metric(&zero, &zero, &dirs).unwrap(), int(0));
        let d = cone_distance(&zero, &seg, &dirs).unwrap();
        assert_eq!(d.value, t);
        assert!(d.all_directions_bound >= 3.0 / 7.0);
        assert_eq!(cone_metric(&seg, &zero, &dirs).unwrap(), t);
    }
}
