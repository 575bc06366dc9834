//! Exact extreme-point computation for point sets in dimension at most 3.
//!
//! Rational inputs are scaled to a common denominator. Small coordinates run in `i128`,
//! anything else in `BigInt`.

use num::{BigInt, Integer, One, Signed, ToPrimitive};

use crate::Rational;

trait Coord: Clone + Ord + Signed {}
impl<T: Clone + Ord + Signed> Coord for T {}

/// Coordinates below this magnitude keep 3×3 determinants inside `i128`.
const FAST_BOUND: i64 = 1 << 40;

fn diff<T: Coord>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn det2<T: Coord>(a0: &T, a1: &T, b0: &T, b1: &T) -> T {
    a0.clone() * b1.clone() - a1.clone() * b0.clone()
}

fn det3<T: Coord>(a: &[T], b: &[T], c: &[T]) -> T {
    a[0].clone() * det2(&b[1], &b[2], &c[1], &c[2]) - a[1].clone() * det2(&b[0], &b[2], &c[0], &c[2])
        + a[2].clone() * det2(&b[0], &b[1], &c[0], &c[1])
}

fn cross<T: Coord>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        det2(&a[1], &a[2], &b[1], &b[2]),
        det2(&a[2], &a[0], &b[2], &b[0]),
        det2(&a[0], &a[1], &b[0], &b[1]),
    ]
}

/// Indices of the extreme points of `points`, ascending. Duplicates keep their first index.
pub(crate) fn extreme_points(points: &[Vec<Rational>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for p in points {
        for x in p {
            lcm = lcm.lcm(x.denom());
        }
    }
    let scaled: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| p.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
        .collect();
    let small = scaled
        .iter()
        .flatten()
        .all(|x| x.to_i64().is_some_and(|v| v.abs() < FAST_BOUND));
    if small {
        let fast: Vec<Vec<i128>> = scaled
            .iter()
            .map(|p| p.iter().map(|x| x.to_i128().unwrap()).collect())
            .collect();
        extreme_generic(&fast)
    } else {
        extreme_generic(&scaled)
    }
}

fn extreme_generic<T: Coord>(points: &[Vec<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
    order.dedup_by(|a, b| points[*a] == points[*b]);
    let pts: Vec<Vec<T>> = order.iter().map(|&i| points[i].clone()).collect();
    let mut out: Vec<usize> = affine_extremes(&pts).into_iter().map(|i| order[i]).collect();
    out.sort_unstable();
    out
}

/// Extreme points of distinct points, after projecting onto their affine hull.
fn affine_extremes<T: Coord>(pts: &[Vec<T>]) -> Vec<usize> {
    let n = pts.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let dim = pts[0].len();
    let p0 = &pts[0];
    let diffs: Vec<Vec<T>> = pts.iter().map(|p| diff(p, p0)).collect();
    let Some(u) = (1..n).find(|&i| diffs[i].iter().any(|x| !x.is_zero())) else {
        return vec![0];
    };
    // a second direction independent of u, and the coordinate pair witnessing it
    let mut second = None;
    'search: for v in 1..n {
        for i in 0..dim {
            for j in i + 1..dim {
                if !det2(&diffs[u][i], &diffs[u][j], &diffs[v][i], &diffs[v][j]).is_zero() {
                    second = Some((v, i, j));
                    break 'search;
                }
            }
        }
    }
    let Some((v, ci, cj)) = second else {
        let k = (0..dim).find(|&k| !diffs[u][k].is_zero()).unwrap();
        let lo = (0..n).min_by(|&a, &b| pts[a][k].cmp(&pts[b][k])).unwrap();
        let hi = (0..n).max_by(|&a, &b| pts[a][k].cmp(&pts[b][k])).unwrap();
        return vec![lo, hi];
    };
    if dim == 3 {
        let normal = cross(&diffs[u], &diffs[v]);
        let off_plane = |w: &usize| {
            let d = (0..3).fold(T::zero(), |acc, k| acc + normal[k].clone() * diffs[*w][k].clone());
            !d.is_zero()
        };
        if let Some(w) = (1..n).find(off_plane) {
            return hull3_extremes(pts, [0, u, v, w]);
        }
    }
    let planar: Vec<(T, T)> = pts.iter().map(|p| (p[ci].clone(), p[cj].clone())).collect();
    monotone_chain(&planar)
}

fn turn<T: Coord>(o: &(T, T), a: &(T, T), b: &(T, T)) -> T {
    det2(
        &(a.0.clone() - o.0.clone()),
        &(a.1.clone() - o.1.clone()),
        &(b.0.clone() - o.0.clone()),
        &(b.1.clone() - o.1.clone()),
    )
}

/// Strict convex hull in the plane; collinear boundary points are dropped.
fn monotone_chain<T: Coord>(pts: &[(T, T)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().cloned().collect() };
        for &i in &seq {
            while hull.len() >= start + 2
                && turn(&pts[hull[hull.len() - 2]], &pts[hull[hull.len() - 1]], &pts[i]) <= T::zero()
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.sort_unstable();
    hull.dedup();
    hull
}

fn orient<T: Coord>(pts: &[Vec<T>], f: &[usize; 3], p: &[T]) -> T {
    let a = &pts[f[0]];
    det3(&diff(&pts[f[1]], a), &diff(&pts[f[2]], a), &diff(p, a))
}

/// Triangulated boundary of the hull of `subset`, outward oriented, starting from the
/// non-degenerate tetrahedron `seed`. Points on the boundary may survive as vertices.
fn hull3_faces<T: Coord>(pts: &[Vec<T>], subset: &[usize], seed: [usize; 4]) -> Vec<[usize; 3]> {
    let [a, b, c, d] = seed;
    let mut faces: Vec<[usize; 3]> = vec![[a, b, c], [a, c, d], [a, d, b], [b, d, c]];
    if orient(pts, &faces[0], &pts[d]) > T::zero() {
        faces = faces.into_iter().map(|[x, y, z]| [x, z, y]).collect();
    }
    for &p in subset {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| orient(pts, f, &pts[p]) > T::zero()).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = std::collections::HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let mut next: Vec<[usize; 3]> = faces.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        for f in faces.iter().zip(&visible).filter(|(_, &v)| v).map(|(f, _)| f) {
            for k in 0..3 {
                let (x, y) = (f[k], f[(k + 1) % 3]);
                if !edges.contains(&(y, x)) {
                    next.push([x, y, p]);
                }
            }
        }
        faces = next;
    }
    faces
}

fn hull3_extremes<T: Coord>(pts: &[Vec<T>], seed: [usize; 4]) -> Vec<usize> {
    let all: Vec<usize> = (0..pts.len()).collect();
    let faces = hull3_faces(pts, &all, seed);
    let mut candidates: Vec<usize> = faces.iter().flatten().cloned().collect();
    candidates.sort_unstable();
    candidates.dedup();
    // a boundary point is extreme when its incident triangles span at least three planes
    candidates.retain(|&v| {
        let mut planes: Vec<[usize; 3]> = Vec::new();
        for f in faces.iter().filter(|f| f.contains(&v)) {
            let flat = cross(&diff(&pts[f[1]], &pts[f[0]]), &diff(&pts[f[2]], &pts[f[0]]));
            if flat.iter().all(|x| x.is_zero()) {
                continue;
            }
            if !planes.iter().any(|q| f.iter().all(|&w| orient(pts, q, &pts[w]).is_zero())) {
                planes.push(*f);
            }
        }
        planes.len() >= 3
    });
    candidates
}
