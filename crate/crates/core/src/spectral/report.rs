use super::{
    bs_distance_to_cayley, bs_local_statistics, cayley_spectral_radius_estimate, markov_spectral_radius_rho0,
    CayleyInterval, SchreierGraph,
};
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::subgroup::Subgroup;
use crate::Rational;

/// Number of trailing family members used as the finite stand-in for `lim sup ρ₀`.
pub const TRAILING_WINDOW: usize = 3;
/// Radius used for the Cayley interval in reports.
pub const REPORT_CAYLEY_RADIUS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    /// `None` when the graph has a single vertex.
    pub rho0: Option<f64>,
    pub bs_distance: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalApproximationReport {
    pub radius: usize,
    pub tolerance: f64,
    pub rows: Vec<ReportRow>,
    pub cayley: CayleyInterval,
    /// Largest defined `ρ₀` among the last [`TRAILING_WINDOW`] members.
    pub trailing_rho0: Option<f64>,
    pub hypothesis_observed: bool,
    pub conclusion_observed: bool,
    pub theorem_consistent: bool,
}

/// Compares spectral radii of a family of finite-index subgroups with the Cayley interval,
/// and their Benjamini–Schramm distance to the Cayley graph.
///
/// * `hypothesis_observed`: the trailing `ρ₀` is at most the upper Cayley bound plus
///   `tolerance` (false when no `ρ₀` is defined).
/// * `conclusion_observed`: the last distance is below the first and the least-squares
///   slope of distance against `ln(index)` is negative.
pub fn local_approximation_report(family: &[Subgroup], radius: usize, tolerance: f64) -> Result<LocalApproximationReport> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidSubgroup("empty family".into()))?;
    let parent = first.parent();
    let rank = parent
        .free_rank()
        .ok_or_else(|| Error::Unsupported("local approximation needs a free parent".into()))?;
    let cayley = if rank == 1 {
        // the Cayley graph of ℤ is amenable
        CayleyInterval {
            radius: REPORT_CAYLEY_RADIUS,
            lower: 1.0,
            upper: 1.0,
        }
    } else {
        cayley_spectral_radius_estimate(parent, REPORT_CAYLEY_RADIUS)?
    };
    let mut rows = Vec::with_capacity(family.len());
    for h in family {
        if h.parent() != parent {
            return Err(Error::FamilyMismatch);
        }
        let g = SchreierGraph::from_subgroup(h)?;
        let rho0 = match markov_spectral_radius_rho0(&g, tolerance.max(1e-12)) {
            Ok(r) => Some(r),
            Err(Error::GraphTooSmall) => None,
            Err(e) => return Err(e),
        };
        let stats = bs_local_statistics(&g, radius);
        rows.push(ReportRow {
            index: g.vertex_count(),
            rho0,
            bs_distance: bs_distance_to_cayley(&stats, parent)?,
        });
    }
    if rows.windows(2).any(|w| w[1].index < w[0].index) {
        return Err(Error::InvalidSubgroup("family indices must be nondecreasing".into()));
    }
    let trailing_rho0 = rows
        .iter()
        .rev()
        .take(TRAILING_WINDOW)
        .filter_map(|r| r.rho0)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let hypothesis_observed = trailing_rho0.is_some_and(|r| r <= cayley.upper + tolerance);
    let conclusion_observed = rows.len() >= 2
        && rows.last().unwrap().bs_distance < rows[0].bs_distance
        && slope(&rows) < 0.0;
    Ok(LocalApproximationReport {
        radius,
        tolerance,
        cayley,
        trailing_rho0,
        hypothesis_observed,
        conclusion_observed,
        theorem_consistent: !hypothesis_observed || conclusion_observed,
        rows,
    })
}

/// Least-squares slope of the distances against `ln(index)`, summed in family order.
fn slope(rows: &[ReportRow]) -> f64 {
    let xs: Vec<f64> = rows.iter().map(|r| (r.index as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| to_f64(&r.bs_distance)).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
