use std::time::Instant;

use irslab_core::group::MarkedGroup;
use irslab_core::rational::to_f64;
use irslab_core::spectral::{
    cayley_spectral_radius_estimate, cycle_kernel, local_approximation_report, markov_spectral_radius_rho0,
    SchreierGraph,
};
use irslab_core::subgroup::Subgroup;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Checks, Fixtures};
use crate::report::fmt_f64;

/// `(n, ρ₀)` rows.
fn parse_cycle_table(text: &str) -> Result<Vec<(usize, f64)>, String> {
    super::data_lines(text)
        .map(|(n, line)| {
            let mut it = line.split_whitespace();
            let index = it.next().and_then(|s| s.parse().ok());
            let value = it.next().and_then(|s| s.parse().ok());
            match (index, value, it.next()) {
                (Some(i), Some(v), None) => Ok((i, v)),
                _ => Err(format!("line {n}: expected `n rho0`")),
            }
        })
        .collect()
}

pub(super) fn cycle_family(fx: &Fixtures, ck: &mut Checks) {
    let start = Instant::now();
    let Some(table) = ck.ok("cycle fixture parses", parse_cycle_table(&fx.cycle_spectra)) else {
        return;
    };
    let indices: Vec<usize> = table.iter().map(|r| r.0).collect();
    ck.check(
        "fixture covers n = 2, 4, 8, 16, 32, 64",
        indices == [2, 4, 8, 16, 32, 64],
        format!("{indices:?}"),
    );
    for (n, expected) in table {
        // the 2-vertex graph is held to the tighter tolerance
        let tol = if n == 2 { 1e-12 } else { 1e-9 };
        let name = format!("rho0 at n = {n}");
        let graph = cycle_kernel(n).and_then(|h| SchreierGraph::from_subgroup(&h));
        let Some(graph) = ck.ok(&name, graph) else { continue };
        if let Some(r) = ck.ok(&name, markov_spectral_radius_rho0(&graph, 1e-12)) {
            ck.check(
                &name,
                (r - expected).abs() < tol,
                format!("{} vs {} (tolerance {tol:e})", fmt_f64(r), fmt_f64(expected)),
            );
        }
    }
    ck.runtime("runtime", start, 1.0);
}

pub(super) fn cayley_interval(_: &Fixtures, ck: &mut Checks) {
    let start = Instant::now();
    let Some(f2) = ck.ok("free group", MarkedGroup::free(2)) else { return };
    let target = 3f64.sqrt() / 2.0;
    let mut prev: Option<(f64, f64)> = None;
    let mut monotone = true;
    let mut trail = Vec::new();
    for r in 4..=14 {
        let Some(iv) = ck.ok(&format!("interval at R = {r}"), cayley_spectral_radius_estimate(&f2, r)) else {
            return;
        };
        if let Some((lo, hi)) = prev {
            monotone &= iv.lower >= lo && iv.upper <= hi;
        }
        trail.push(format!("R={r}: [{}, {}]", fmt_f64(iv.lower), fmt_f64(iv.upper)));
        prev = Some((iv.lower, iv.upper));
        if r == 14 {
            ck.check(
                "R = 14 contains sqrt(3)/2",
                iv.contains(target),
                format!("[{}, {}]", fmt_f64(iv.lower), fmt_f64(iv.upper)),
            );
            ck.check("R = 14 width <= 0.04", iv.width() <= 0.04, fmt_f64(iv.width()));
        }
    }
    ck.check("monotone shrinking over R = 4..14", monotone, trail.join("; "));
    ck.runtime("runtime", start, 10.0);
}

/// One trial's family, drawn from a single seed; the statistics use the last member.
const RANDOM_FAMILY: [usize; 3] = [50, 100, 200];
const REPORT_RADIUS: usize = 2;
const REPORT_TOLERANCE: f64 = 1e-9;

pub(super) fn random_family(_: &Fixtures, ck: &mut Checks) {
    let start = Instant::now();
    let Some(f2) = ck.ok("free group", MarkedGroup::free(2)) else { return };
    let mut small_rho = 0;
    let mut distances = Vec::new();
    let mut inconsistent = Vec::new();
    let mut rows = Vec::new();
    for seed in 1..=20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family: Result<Vec<Subgroup>, _> = RANDOM_FAMILY
            .iter()
            .map(|&n| Subgroup::random_finite_index(&f2, n, &mut rng))
            .collect();
        let Some(family) = ck.ok(&format!("family for seed {seed}"), family) else { continue };
        let report = local_approximation_report(&family, REPORT_RADIUS, REPORT_TOLERANCE);
        let Some(report) = ck.ok(&format!("report for seed {seed}"), report) else { continue };
        let last = report.rows.last().expect("nonempty family");
        let rho = last.rho0.unwrap_or(f64::NAN);
        small_rho += (rho <= 0.95) as usize;
        distances.push(to_f64(&last.bs_distance));
        if !report.theorem_consistent {
            inconsistent.push(seed);
        }
        rows.push(format!("seed {seed}: rho0 {}, d_BS {}", fmt_f64(rho), fmt_f64(to_f64(&last.bs_distance))));
    }
    ck.check("rho0 <= 0.95 in at least 18 of 20 trials", small_rho >= 18, format!("{small_rho}/20"));
    distances.sort_by(f64::total_cmp);
    let median = match distances.len() {
        0 => f64::NAN,
        k if k % 2 == 1 => distances[k / 2],
        k => (distances[k / 2 - 1] + distances[k / 2]) / 2.0,
    };
    ck.check(
        "median BS distance at R = 2 <= 0.1",
        median <= 0.1,
        format!("median {}; {}", fmt_f64(median), rows.join("; ")),
    );
    ck.check(
        "theorem_consistent on every random trial",
        inconsistent.is_empty(),
        format!("inconsistent seeds {inconsistent:?}"),
    );
    let cycle: Result<Vec<Subgroup>, _> = [4, 8, 16, 32, 64].iter().map(|&n| cycle_kernel(n)).collect();
    if let Some(cycle) = ck.ok("cycle family", cycle) {
        if let Some(report) = ck.ok(
            "cycle family report",
            local_approximation_report(&cycle, REPORT_RADIUS, REPORT_TOLERANCE),
        ) {
            ck.check(
                "theorem_consistent on the cycle family",
                report.theorem_consistent,
                format!(
                    "hypothesis {}, conclusion {}",
                    report.hypothesis_observed, report.conclusion_observed
                ),
            );
        }
    }
    ck.runtime("runtime", start, 60.0);
}
