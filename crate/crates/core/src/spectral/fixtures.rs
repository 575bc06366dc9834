//! The cycle family: kernels of `F₂ → ℤ/n`, `a ↦ 1`, `b ↦ 0`.

use crate::error::Result;
use crate::group::fixtures::cyclic;
use crate::group::{HomImages, MarkedGroup};
use crate::subgroup::Subgroup;

/// Its Schreier graph is an `n`-cycle with a loop pair at every vertex, so
/// `ρ₀ = (1 + cos(2π/n))/2`.
pub fn cycle_kernel(n: usize) -> Result<Subgroup> {
    let f2 = MarkedGroup::free(2)?;
    let zn = cyclic(n).finite_arc().expect("cyclic fixture is finite");
    Subgroup::kernel(&f2, &HomImages::from_generators(zn, &[1, 0]))
}

pub fn cycle_rho0(n: usize) -> f64 {
    (1.0 + (2.0 * std::f64::consts::PI / n as f64).cos()) / 2.0
}
