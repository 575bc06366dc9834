//! Bodies, measures and matrix groups for examples and randomized checks.

use num::{BigInt, One};
use rand::seq::SliceRandom;
use rand::Rng;

use super::action::{OrthogonalAction, OrthogonalMatrix};
use super::body::{BodyMeasure, ConvexBody, Point};
use crate::rational::norm_sq;
use crate::Rational;

/// Denominator of random coordinates.
const GRID: i64 = 8;

/// The Klein four-group `{diag(±1, ±1)}` acting on the plane.
pub fn klein_reflections() -> OrthogonalAction {
    let sx = OrthogonalMatrix::from_ints(2, &[1, 0, 0, -1]).unwrap();
    let sy = OrthogonalMatrix::from_ints(2, &[-1, 0, 0, 1]).unwrap();
    OrthogonalAction::generated_by(vec![sx, sy], Some(vec!["sx".into(), "sy".into()])).unwrap()
}

/// The square with vertices `(±1/2, ±1/2)`.
pub fn half_square() -> ConvexBody {
    let h = Rational::new(1.into(), 2.into());
    let pts = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .map(|&(a, b)| vec![&h * Rational::from_integer(a.into()), &h * Rational::from_integer(b.into())])
        .collect();
    ConvexBody::new(2, pts).unwrap()
}

/// Signed permutation matrices: the symmetry group of the cube, of order `2^d d!`, marked
/// by `flip`, `swap` and `cycle` (as far as the dimension allows).
pub fn signed_permutations(dim: usize) -> OrthogonalAction {
    let mut gens = Vec::new();
    let mut flip = vec![0i64; dim * dim];
    for i in 0..dim {
        flip[i * dim + i] = if i == 0 { -1 } else { 1 };
    }
    gens.push(OrthogonalMatrix::from_ints(dim, &flip).unwrap());
    if dim >= 2 {
        let mut swap = vec![0i64; dim * dim];
        swap[1] = 1;
        swap[dim] = 1;
        for i in 2..dim {
            swap[i * dim + i] = 1;
        }
        gens.push(OrthogonalMatrix::from_ints(dim, &swap).unwrap());
    }
    if dim >= 3 {
        let mut cycle = vec![0i64; dim * dim];
        for i in 0..dim {
            cycle[((i + 1) % dim) * dim + i] = 1;
        }
        gens.push(OrthogonalMatrix::from_ints(dim, &cycle).unwrap());
    }
    let labels = ["flip", "swap", "cycle"][..gens.len()].iter().map(|s| s.to_string()).collect();
    OrthogonalAction::generated_by(gens, Some(labels)).unwrap()
}

pub fn random_point<R: Rng>(dim: usize, rng: &mut R) -> Point {
    loop {
        let p: Point = (0..dim)
            .map(|_| Rational::new(BigInt::from(rng.gen_range(-GRID..=GRID)), BigInt::from(GRID)))
            .collect();
        if norm_sq(&p) <= Rational::one() {
            return p;
        }
    }
}

/// The hull of one to six random grid points in the unit ball.
pub fn random_body<R: Rng>(dim: usize, rng: &mut R) -> ConvexBody {
    let k = rng.gen_range(1..=6);
    ConvexBody::new(dim, (0..k).map(|_| random_point(dim, rng)).collect()).unwrap()
}

/// A random body inside `c`: the hull of random convex combinations of its vertices.
pub fn random_sub_body<R: Rng>(c: &ConvexBody, rng: &mut R) -> ConvexBody {
    let verts = c.vertices();
    let k = rng.gen_range(1..=verts.len().max(1) + 1);
    let pts = (0..k)
        .map(|_| {
            let a = verts.choose(rng).unwrap();
            let b = verts.choose(rng).unwrap();
            let t = Rational::new(BigInt::from(rng.gen_range(0..=4)), BigInt::from(4));
            let s = Rational::one() - &t;
            a.iter().zip(b).map(|(x, y)| x * &t + y * &s).collect()
        })
        .collect();
    ConvexBody::new(c.dim(), pts).unwrap()
}

/// One to three atoms inside `c`, sometimes including `c` itself.
pub fn random_measure<R: Rng>(c: &ConvexBody, rng: &mut R) -> BodyMeasure {
    let k = rng.gen_range(1..=3);
    let raw: Vec<u32> = (0..k).map(|_| rng.gen_range(1..5)).collect();
    let total: u32 = raw.iter().sum();
    let atoms = raw
        .iter()
        .map(|&w| {
            let body = if rng.gen_bool(0.3) { c.clone() } else { random_sub_body(c, rng) };
            (body, Rational::new(w.into(), total.into()))
        })
        .collect();
    BodyMeasure::new(atoms).unwrap()
}
