//! Two-sided bounds for the spectral radius of the simple random walk on the Cayley graph
//! of a free group, i.e. on the `2k`-regular tree.
//!
//! The Markov operator preserves radial functions, and on them it acts by the birth-death
//! chain `f(0) ↦ f(1)`, `f(r) ↦ (f(r−1) + (2k−1) f(r+1)) / 2k`. Symmetrizing with the sphere
//! sizes gives a tridiagonal matrix `T` with zero diagonal and off-diagonal entries
//! `√(2k)/2k` (first) and `√(2k−1)/2k` (all others).
//!
//! * Lower bound: the top of the spectrum of the operator truncated to the ball of radius
//!   `R` is at most `ρ`; the Rayleigh quotient of the truncated `T` at a power-iterated
//!   vector is reported.
//! * Upper bound: a Schur-test supersolution. If `h > 0` and `Mh ≤ λh` pointwise then
//!   `ρ ≤ λ`. We take `h` radial, equal to the Dirichlet eigenvector of `T` on `0..=2R` for
//!   levels `≤ R` and continued geometrically with ratio `q` beyond, and choose `q` to
//!   minimise the worst pointwise ratio.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::group::MarkedGroup;

/// Slack added to the upper bound to absorb rounding in the pointwise ratios.
const UPPER_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CayleyInterval {
    pub radius: usize,
    pub lower: f64,
    pub upper: f64,
}

impl CayleyInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Interval `[lower, upper]` containing `ρ(Cay(F_k, S))`. Both ends are monotone in `R`
/// (running max/min over radii `≤ R`).
pub fn cayley_spectral_radius_estimate(g: &MarkedGroup, radius: usize) -> Result<CayleyInterval> {
    let k = g
        .free_rank()
        .ok_or_else(|| Error::Unsupported("Cayley interval needs a free group".into()))?;
    if k < 2 {
        return Err(Error::InvalidGroup("Cayley interval needs rank at least 2".into()));
    }
    let mut lower = 0.0f64;
    let mut upper = 1.0f64;
    for r in 0..=radius {
        lower = lower.max(truncated_lower(k, r));
        upper = upper.min(schur_upper(k, r.max(1)));
    }
    Ok(CayleyInterval { radius, lower, upper })
}

fn off_diagonal(k: usize, r: usize) -> f64 {
    let d = (2 * k) as f64;
    if r == 0 {
        d.sqrt() / d
    } else {
        (d - 1.0).sqrt() / d
    }
}

fn apply_t(k: usize, x: &[f64], y: &mut [f64]) {
    let n = x.len();
    for r in 0..n {
        let mut acc = 0.0;
        if r > 0 {
            acc += off_diagonal(k, r - 1) * x[r - 1];
        }
        if r + 1 < n {
            acc += off_diagonal(k, r) * x[r + 1];
        }
        y[r] = acc;
    }
}

/// Rayleigh quotient of `T` on levels `0..=R` after power iteration on `(T + I)/2`.
pub fn truncated_lower(k: usize, radius: usize) -> f64 {
    let n = radius + 1;
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut last = f64::NEG_INFINITY;
    for _ in 0..100_000 {
        apply_t(k, &x, &mut y);
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if (rq - last).abs() < 1e-15 {
            return rq;
        }
        last = rq;
        for i in 0..n {
            y[i] = 0.5 * (y[i] + x[i]);
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for i in 0..n {
            x[i] = y[i] / norm;
        }
    }
    last
}

/// Worst pointwise ratio `(Mh)(r) / h(r)` of the radial supersolution built at `radius`.
pub fn schur_upper(k: usize, radius: usize) -> f64 {
    let d = (2 * k) as f64;
    let size = 2 * radius + 1;
    let mut t = DMatrix::<f64>::zeros(size, size);
    for r in 0..size - 1 {
        t[(r, r + 1)] = off_diagonal(k, r);
        t[(r + 1, r)] = off_diagonal(k, r);
    }
    let eig = SymmetricEigen::new(t);
    let top = (0..size)
        .max_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .unwrap();
    let phi = eig.eigenvectors.column(top);
    let sign = if phi[0] < 0.0 { -1.0 } else { 1.0 };
    // radial function h(r) = φ(r) / √|S_r|
    let mut h = Vec::with_capacity(radius + 1);
    let mut sphere = 1.0f64;
    for r in 0..=radius {
        if r == 1 {
            sphere = d;
        } else if r > 1 {
            sphere *= d - 1.0;
        }
        h.push(sign * phi[r] / sphere.sqrt());
    }
    if h.iter().any(|&v| v <= 0.0) {
        return 1.0;
    }
    let mut head = h[1] / h[0];
    for r in 1..radius {
        head = head.max((h[r - 1] + (d - 1.0) * h[r + 1]) / (d * h[r]));
    }
    let worst = |q: f64| {
        let at_r = (h[radius - 1] + (d - 1.0) * q * h[radius]) / (d * h[radius]);
        let tail = (1.0 / q + (d - 1.0) * q) / d;
        head.max(at_r).max(tail)
    };
    // grid search, then golden section around the best grid point
    let steps = 200;
    let (mut best_q, mut best) = (1.0, worst(1.0));
    for i in 1..=steps {
        let q = i as f64 / steps as f64;
        let v = worst(q);
        if v < best {
            best = v;
            best_q = q;
        }
    }
    let (mut a, mut b) = ((best_q - 1.0 / steps as f64).max(1e-6), (best_q + 1.0 / steps as f64).min(1.0));
    let phi_ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - phi_ratio * (b - a);
        let e = a + phi_ratio * (b - a);
        if worst(c) < worst(e) {
            b = e;
        } else {
            a = c;
        }
    }
    best.min(worst(0.5 * (a + b))).min(1.0) + UPPER_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    fn rho(k: usize) -> f64 {
        (2.0 * k as f64 - 1.0).sqrt() / k as f64
    }

    #[test]
    fn rank_two_radius_fourteen() {
        let f2 = MarkedGroup::free(2).unwrap();
        let iv = cayley_spectral_radius_estimate(&f2, 14).unwrap();
        assert!(iv.contains(3f64.sqrt() / 2.0), "{iv:?}");
        assert!(iv.width() <= 0.04, "{iv:?}");
        let one = cayley_spectral_radius_estimate(&f2, 1).unwrap();
        assert!(one.lower >= 0.0 && one.lower <= one.upper);
    }

    #[test]
    fn rank_three_contains_closed_form() {
        let f3 = MarkedGroup::free(3).unwrap();
        let iv = cayley_spectral_radius_estimate(&f3, 10).unwrap();
        assert!(iv.contains(rho(3)), "{iv:?}");
    }

    #[test]
    fn monotone_in_radius() {
        let f2 = MarkedGroup::free(2).unwrap();
        let mut prev: Option<CayleyInterval> = None;
        for r in (4..=14).step_by(2) {
            let iv = cayley_spectral_radius_estimate(&f2, r).unwrap();
            if let Some(p) = prev {
                assert!(iv.lower >= p.lower && iv.upper <= p.upper);
            }
            prev = Some(iv);
        }
    }

    /// Top eigenvalue of the walk operator restricted to the explicit ball of `F_k`.
    fn explicit_ball_top(k: usize, radius: usize) -> f64 {
        let g = MarkedGroup::free(k).unwrap();
        let ball = g.ball(radius).unwrap();
        let index: std::collections::HashMap<&GroupElement, usize> = ball.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let n = ball.len();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for (i, x) in ball.iter().enumerate() {
            for l in g.letters() {
                let y = g.multiply(x, &g.letter_element(l)).unwrap();
                if let Some(&j) = index.get(&y) {
                    m[(i, j)] += 1.0 / (2 * k) as f64;
                }
            }
        }
        SymmetricEigen::new(m).eigenvalues.max()
    }

    #[test]
    fn radial_reduction_matches_explicit_ball() {
        for (k, r) in [(2, 1), (2, 3), (2, 5), (3, 3)] {
            assert!((truncated_lower(k, r) - explicit_ball_top(k, r)).abs() < 1e-9);
        }
    }

    /// Return probabilities ⟨M^{2m} δ_e, δ_e⟩ by brute-force word counting on the ball.
    fn return_probability(k: usize, m: usize) -> f64 {
        let g = MarkedGroup::free(k).unwrap();
        let mut dist: std::collections::HashMap<GroupElement, f64> = [(g.identity(), 1.0)].into_iter().collect();
        for t in 0..2 * m {
            let mut next = std::collections::HashMap::new();
            for (x, p) in &dist {
                for l in g.letters() {
                    let y = g.multiply(x, &g.letter_element(l)).unwrap();
                    // positions that cannot return in the remaining steps are dropped
                    if y.as_word().unwrap().len() > 2 * m - t - 1 {
                        continue;
                    }
                    *next.entry(y).or_insert(0.0) += p / (2 * k) as f64;
                }
            }
            dist = next;
        }
        dist[&g.identity()]
    }

    #[test]
    fn return_probabilities_stay_below_interval() {
        for k in [2, 3] {
            let g = MarkedGroup::free(k).unwrap();
            let iv = cayley_spectral_radius_estimate(&g, 10).unwrap();
            let mut prev = 0.0;
            for m in 1..=6 {
                let p = return_probability(k, m).powf(1.0 / (2 * m) as f64);
                assert!(p <= iv.upper && p <= rho(k) + 1e-12);
                assert!(p >= prev);
                prev = p;
            }
        }
    }
}
