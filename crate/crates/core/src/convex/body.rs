//! Polytopes inside the closed unit ball, stored by their exact extreme points.

use num::{BigInt, Integer, One, Signed, Zero};

use super::hull::extreme_points;
use crate::error::{Error, Result};
use crate::rational::{dot, norm_sq, to_f64};
use crate::Rational;

pub type Point = Vec<Rational>;

/// A convex polytope `conv(vertices) ⊆ B(0, 1)`. Vertices are exactly the extreme points,
/// sorted, so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Point>,
    // vertices over a common denominator, for fast exact support evaluation
    scaled: Vec<Vec<BigInt>>,
    denom: BigInt,
}

fn common_denominator<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scale_to(p: &[Rational], denom: &BigInt) -> Vec<BigInt> {
    p.iter().map(|x| x.numer() * (denom / x.denom())).collect()
}

impl ConvexBody {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if norm_sq(p) > Rational::one() {
                return Err(Error::LeavesUnitBall);
            }
        }
        Ok(Self::hull_unchecked(dim, points))
    }

    fn hull_unchecked(dim: usize, points: Vec<Point>) -> Self {
        let keep = extreme_points(&points);
        let mut vertices: Vec<Point> = keep.into_iter().map(|i| points[i].clone()).collect();
        vertices.sort();
        let denom = common_denominator(vertices.iter().flatten());
        let scaled = vertices.iter().map(|v| scale_to(v, &denom)).collect();
        ConvexBody {
            dim,
            vertices,
            scaled,
            denom,
        }
    }

    pub fn point(p: Point) -> Result<Self> {
        Self::new(p.len(), vec![p])
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        Self::new(a.len(), vec![a, b])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            })
        }
    }

    /// `(b⁺, b⁻)` = max and min of `⟨b, v⟩` over the body.
    pub fn support(&self, b: &[Rational]) -> Result<(Rational, Rational)> {
        self.check_dim(b.len())?;
        let bd = common_denominator(b.iter());
        let bs = scale_to(b, &bd);
        let vals: Vec<BigInt> = self
            .scaled
            .iter()
            .map(|v| v.iter().zip(&bs).map(|(x, y)| x * y).sum())
            .collect();
        let d = &bd * &self.denom;
        let max = Rational::new(vals.iter().max().unwrap().clone(), d.clone());
        let min = Rational::new(vals.iter().min().unwrap().clone(), d);
        Ok((max, min))
    }

    pub fn support_max(&self, b: &[Rational]) -> Result<Rational> {
        Ok(self.support(b)?.0)
    }

    /// Floating-point support for directions that are not rational.
    pub fn support_f64(&self, b: &[f64]) -> Result<(f64, f64)> {
        self.check_dim(b.len())?;
        let vals = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(b).map(|(x, y)| to_f64(x) * y).sum::<f64>());
        Ok(vals.fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), x| (hi.max(x), lo.min(x))))
    }

    pub fn contains_point(&self, p: &[Rational]) -> Result<bool> {
        self.check_dim(p.len())?;
        if self.vertices.iter().any(|v| v.as_slice() == p) {
            return Ok(true);
        }
        let mut pts = self.vertices.clone();
        pts.push(p.to_vec());
        Ok(!extreme_points(&pts).contains(&(pts.len() - 1)))
    }

    /// `self ⊆ outer`. Coordinate-axis supports act as a quick rejection before the exact
    /// vertex-in-polytope tests.
    pub fn is_subset_of(&self, outer: &ConvexBody) -> Result<bool> {
        outer.check_dim(self.dim)?;
        for k in 0..self.dim {
            for sign in [1, -1] {
                let mut e = vec![Rational::zero(); self.dim];
                e[k] = Rational::from_integer(sign.into());
                if self.support_max(&e)? > outer.support_max(&e)? {
                    return Ok(false);
                }
            }
        }
        for v in &self.vertices {
            if !outer.contains_point(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn scale(&self, lambda: &Rational) -> ConvexBody {
        Self::hull_unchecked(
            self.dim,
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| x * lambda).collect())
                .collect(),
        )
    }

    /// `C ∩ {x : ⟨a, x⟩ = 0}`, or `None` when empty. Vertices of the section lie on edges of
    /// `C`, so crossing points of all vertex pairs contain them.
    pub fn section(&self, a: &[Rational]) -> Result<Option<ConvexBody>> {
        self.check_dim(a.len())?;
        let s: Vec<Rational> = self.vertices.iter().map(|v| dot(a, v)).collect();
        let mut pts: Vec<Point> = Vec::new();
        for (i, vi) in self.vertices.iter().enumerate() {
            if s[i].is_zero() {
                pts.push(vi.clone());
            }
            for (j, vj) in self.vertices.iter().enumerate() {
                if s[i].is_positive() && s[j].is_negative() {
                    let denom = &s[i] - &s[j];
                    pts.push(
                        vi.iter()
                            .zip(vj)
                            .map(|(x, y)| (&s[i] * y - &s[j] * x) / &denom)
                            .collect(),
                    );
                }
            }
        }
        if pts.is_empty() {
            Ok(None)
        } else {
            Ok(Some(Self::hull_unchecked(self.dim, pts)))
        }
    }
}

/// `(b⁺(C), b⁻(C))` for a real direction.
pub fn support_eval(c: &ConvexBody, b: &[f64]) -> Result<(f64, f64)> {
    c.support_f64(b)
}

fn sum_unchecked(a: &ConvexBody, b: &ConvexBody, lambda: &Rational, mu: &Rational) -> ConvexBody {
    let mut pts = Vec::with_capacity(a.vertices.len() * b.vertices.len());
    for u in &a.vertices {
        for v in &b.vertices {
            pts.push(u.iter().zip(v).map(|(x, y)| x * lambda + y * mu).collect());
        }
    }
    ConvexBody::hull_unchecked(a.dim, pts)
}

/// `λA + μB`, the hull of pairwise sums of scaled vertices.
pub fn minkowski_sum(a: &ConvexBody, b: &ConvexBody, lambda: &Rational, mu: &Rational) -> Result<ConvexBody> {
    a.check_dim(b.dim)?;
    if lambda.is_negative() || mu.is_negative() {
        return Err(Error::InvalidDistribution("negative Minkowski coefficient".into()));
    }
    let out = sum_unchecked(a, b, lambda, mu);
    if out.vertices.iter().any(|v| norm_sq(v) > Rational::one()) {
        return Err(Error::LeavesUnitBall);
    }
    Ok(out)
}

/// A finitely supported probability measure on bodies of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyMeasure {
    atoms: Vec<(ConvexBody, Rational)>,
}

impl BodyMeasure {
    /// Merges repeated bodies and sorts atoms by body.
    pub fn new(atoms: Vec<(ConvexBody, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        let dim = atoms[0].0.dim;
        let mut merged: std::collections::BTreeMap<ConvexBody, Rational> = Default::default();
        for (body, w) in atoms {
            body.check_dim(dim).map_err(|_| Error::DimensionMismatch {
                expected: dim,
                got: body.dim,
            })?;
            if !w.is_positive() {
                return Err(Error::InvalidDistribution("weights must be positive".into()));
            }
            *merged.entry(body).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Ok(BodyMeasure {
            atoms: merged.into_iter().collect(),
        })
    }

    pub fn dirac(c: &ConvexBody) -> Self {
        BodyMeasure {
            atoms: vec![(c.clone(), Rational::one())],
        }
    }

    pub fn atoms(&self) -> &[(ConvexBody, Rational)] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.dim
    }

    pub fn is_dirac_at(&self, c: &ConvexBody) -> bool {
        self.atoms.len() == 1 && &self.atoms[0].0 == c
    }
}

/// `Σ wᵢ Cᵢ`, whose support function is the `ν`-average of the atoms' support functions.
pub fn barycenter(nu: &BodyMeasure) -> Result<ConvexBody> {
    let mut iter = nu.atoms.iter();
    let (first, w0) = iter.next().ok_or(Error::EmptyMeasure)?;
    let mut acc = first.scale(w0);
    for (body, w) in iter {
        acc = sum_unchecked(&acc, body, &Rational::one(), w);
    }
    Ok(acc)
}

/// Outcome of testing whether `C = (A + B)/2` forces `A = B = C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremePointReport {
    pub midpoint_equals: bool,
    pub forced_equalities_hold: bool,
}

impl ExtremePointReport {
    pub fn implication_holds(&self) -> bool {
        !self.midpoint_equals || self.forced_equalities_hold
    }
}

pub fn extreme_point_check(c: &ConvexBody, a: &ConvexBody, b: &ConvexBody) -> Result<ExtremePointReport> {
    if !a.is_subset_of(c)? || !b.is_subset_of(c)? {
        return Err(Error::NotContained);
    }
    let half = Rational::new(1.into(), 2.into());
    let mid = sum_unchecked(a, b, &half, &half);
    Ok(ExtremePointReport {
        midpoint_equals: &mid == c,
        forced_equalities_hold: a == c && b == c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(v: &[(i64, i64)]) -> Point {
        v.iter().map(|&(a, b)| ratio(a, b)).collect()
    }

    fn square() -> ConvexBody {
        let h = 2;
        ConvexBody::new(
            2,
            vec![p(&[(1, h), (1, h)]), p(&[(-1, h), (1, h)]), p(&[(1, h), (-1, h)]), p(&[(-1, h), (-1, h)])],
        )
        .unwrap()
    }

    #[test]
    fn support_examples() {
        let (hi, lo) = square().support(&[int(1), int(0)]).unwrap();
        assert_eq!((hi, lo), (ratio(1, 2), ratio(-1, 2)));
        let q = ConvexBody::point(p(&[(1, 3), (1, 5)])).unwrap();
        let (hi, lo) = q.support(&[int(2), int(1)]).unwrap();
        assert_eq!(hi, lo);
        let seg = ConvexBody::segment(p(&[(0, 1), (0, 1)]), p(&[(1, 1), (0, 1)])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (hi, lo) = support_eval(&seg, &[s, s]).unwrap();
        assert!((hi - s).abs() < 1e-15 && lo == 0.0);
        assert!(matches!(seg.support(&[int(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn minkowski_examples() {
        let a = ConvexBody::segment(p(&[(0, 1), (0, 1)]), p(&[(1, 1), (0, 1)])).unwrap();
        let b = ConvexBody::segment(p(&[(0, 1), (0, 1)]), p(&[(0, 1), (1, 1)])).unwrap();
        let half = ratio(1, 2);
        let sq = minkowski_sum(&a, &b, &half, &half).unwrap();
        let expected = ConvexBody::new(
            2,
            vec![p(&[(0, 1), (0, 1)]), p(&[(1, 2), (0, 1)]), p(&[(0, 1), (1, 2)]), p(&[(1, 2), (1, 2)])],
        )
        .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(minkowski_sum(&a, &b, &int(1), &int(0)).unwrap(), a);
        assert_eq!(minkowski_sum(&a, &a, &half, &half).unwrap(), a);
        assert_eq!(minkowski_sum(&a, &b, &int(1), &int(1)), Err(Error::LeavesUnitBall));
    }

    #[test]
    fn barycenter_examples() {
        let c = square();
        assert_eq!(barycenter(&BodyMeasure::dirac(&c)).unwrap(), c);
        let pts = [p(&[(1, 2), (0, 1)]), p(&[(0, 1), (1, 2)]), p(&[(-1, 4), (-1, 4)])];
        let third = ratio(1, 3);
        let nu = BodyMeasure::new(pts.iter().map(|q| (ConvexBody::point(q.clone()).unwrap(), third.clone())).collect()).unwrap();
        let bary = barycenter(&nu).unwrap();
        assert_eq!(bary.vertices(), &[p(&[(1, 12), (1, 12)])]);
        assert_eq!(BodyMeasure::new(vec![]), Err(Error::EmptyMeasure));
    }

    #[test]
    fn containment_and_sections() {
        let c = square();
        assert!(c.contains_point(&[int(0), int(0)]).unwrap());
        assert!(c.contains_point(&[ratio(1, 2), int(0)]).unwrap());
        assert!(!c.contains_point(&[ratio(3, 5), int(0)]).unwrap());
        let axis = c.section(&[int(0), int(1)]).unwrap().unwrap();
        assert_eq!(axis, ConvexBody::segment(p(&[(-1, 2), (0, 1)]), p(&[(1, 2), (0, 1)])).unwrap());
        let far = ConvexBody::point(p(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(far.section(&[int(1), int(0)]).unwrap(), None);
    }

    #[test]
    fn extreme_point_examples() {
        let c = square();
        let r = extreme_point_check(&c, &c, &c).unwrap();
        assert!(r.midpoint_equals && r.forced_equalities_hold);
        let face = ConvexBody::segment(p(&[(1, 2), (1, 2)]), p(&[(1, 2), (-1, 2)])).unwrap();
        let r = extreme_point_check(&c, &c, &face).unwrap();
        assert!(!r.midpoint_equals && r.implication_holds());
        let outside = ConvexBody::point(p(&[(3, 4), (0, 1)])).unwrap();
        assert_eq!(extreme_point_check(&c, &c, &outside), Err(Error::NotContained));
    }
}
