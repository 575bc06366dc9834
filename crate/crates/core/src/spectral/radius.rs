use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SchreierGraph;
use crate::error::{Error, Result};

/// Largest graph handled by the dense route.
pub const DENSE_LIMIT: usize = 2000;
/// Hard cap on power iterations.
pub const MAX_ITERATIONS: usize = 100_000;
/// Convergence window of the power iteration.
pub const WINDOW: usize = 10;

/// Spectral radius of the Markov operator on the orthogonal complement of constants.
/// Dense eigendecomposition up to [`DENSE_LIMIT`] vertices, deflated power iteration beyond.
pub fn markov_spectral_radius_rho0(graph: &SchreierGraph, tolerance: f64) -> Result<f64> {
    if graph.vertex_count() <= DENSE_LIMIT {
        rho0_dense(graph)
    } else {
        rho0_power(graph, tolerance)
    }
}

/// `max |λ|` of `M − J/n` from a dense symmetric eigendecomposition.
pub fn rho0_dense(graph: &SchreierGraph) -> Result<f64> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::GraphTooSmall);
    }
    let scale = 1.0 / graph.letters() as f64;
    let mut m = DMatrix::<f64>::from_element(n, n, -1.0 / n as f64);
    for l in 0..graph.letters() {
        for v in 0..n {
            m[(v, graph.neighbor(v, l))] += scale;
        }
    }
    let eig = SymmetricEigen::new(m);
    Ok(eig.eigenvalues.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())))
}

/// Power iteration on `M²` restricted to mean-zero vectors. The estimate is `‖Mx‖` for a
/// unit mean-zero `x`, i.e. the square root of the Rayleigh quotient of `M²`; it stops once
/// the relative change over [`WINDOW`] iterations drops below `tolerance`.
pub fn rho0_power(graph: &SchreierGraph, tolerance: f64) -> Result<f64> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::GraphTooSmall);
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidGraph("tolerance must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    let mut y = vec![0.0; n];
    deflate_normalize(&mut x);
    let mut history: Vec<f64> = Vec::with_capacity(WINDOW + 1);
    for _ in 0..MAX_ITERATIONS {
        graph.apply_markov(&x, &mut y);
        let mean = y.iter().sum::<f64>() / n as f64;
        y.iter_mut().for_each(|v| *v -= mean);
        let estimate = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if estimate == 0.0 {
            return Ok(0.0);
        }
        history.push(estimate);
        if history.len() > WINDOW {
            let old = history.remove(0);
            if (estimate - old).abs() <= tolerance * estimate {
                return Ok(estimate);
            }
        }
        // one more application keeps the iteration on M², which handles negative extremes
        graph.apply_markov(&y, &mut x);
        deflate_normalize(&mut x);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

fn deflate_normalize(x: &mut [f64]) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}
