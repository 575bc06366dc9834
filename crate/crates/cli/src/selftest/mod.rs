//! Built-in acceptance checks, one group per numbered criterion.

mod convex;
mod irs;
mod spectral;
mod subgroup;
mod tdlc;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::error::{CliError, Result};
use crate::report::RunReport;

/// Reference data the checks compare against. Loaded from the bundled files; tests swap in
/// corrupted copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixtures {
    pub cycle_spectra: String,
    pub diagonal: String,
    pub irs_groups: String,
    pub factorial: String,
    pub klein_square: String,
    pub klein_irs: String,
    pub klein_barycenter: String,
    pub minkowski_segments: String,
    pub minkowski_square: String,
}

impl Fixtures {
    pub fn bundled() -> Self {
        Fixtures {
            cycle_spectra: include_str!("../../fixtures/cycle_spectra.txt").into(),
            diagonal: include_str!("../../fixtures/diagonal.txt").into(),
            irs_groups: include_str!("../../fixtures/irs_groups.txt").into(),
            factorial: include_str!("../../fixtures/factorial.txt").into(),
            klein_square: include_str!("../../fixtures/klein_square.txt").into(),
            klein_irs: include_str!("../../fixtures/klein_irs.txt").into(),
            klein_barycenter: include_str!("../../fixtures/klein_barycenter.txt").into(),
            minkowski_segments: include_str!("../../fixtures/minkowski_segments.txt").into(),
            minkowski_square: include_str!("../../fixtures/minkowski_square.txt").into(),
        }
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct Checks {
    items: Vec<Check>,
    timings: Vec<(String, f64)>,
}

impl Checks {
    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.items.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Unwraps `r`, recording a failed check named `name` on error.
    pub fn ok<T, E: std::fmt::Display>(&mut self, name: &str, r: std::result::Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(name, false, e.to_string());
                None
            }
        }
    }

    /// Wall-clock budget. The measured time goes to the timings so the check itself stays
    /// reproducible.
    pub fn runtime(&mut self, name: &str, start: Instant, limit_secs: f64) {
        let secs = start.elapsed().as_secs_f64();
        self.timings.push((name.into(), secs));
        self.check(name, secs <= limit_secs, format!("limit {limit_secs} s"));
    }

    pub fn items(&self) -> &[Check] {
        &self.items
    }
}

type CheckFn = fn(&Fixtures, &mut Checks);

#[derive(Debug)]
pub struct Criterion {
    pub id: u32,
    pub module: &'static str,
    pub title: &'static str,
    run: Option<CheckFn>,
}

pub const DETERMINISM: u32 = 10;

pub static CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, module: "spectral", title: "cycle-family spectral radii", run: Some(spectral::cycle_family) },
    Criterion { id: 2, module: "spectral", title: "Cayley spectral radius interval", run: Some(spectral::cayley_interval) },
    Criterion { id: 3, module: "spectral", title: "random Schreier graph families", run: Some(spectral::random_family) },
    Criterion { id: 4, module: "tdlc", title: "Haar ratios by coset counting", run: Some(tdlc::haar_ratios) },
    Criterion { id: 5, module: "tdlc", title: "Følner certificates", run: Some(tdlc::folner) },
    Criterion { id: 6, module: "irs", title: "invariance and normal closures", run: Some(irs::closures) },
    Criterion { id: 7, module: "convex-cone", title: "cone operations", run: Some(convex::operations) },
    Criterion { id: 8, module: "convex-cone", title: "Klein barycenter pipeline", run: Some(convex::klein) },
    Criterion { id: 9, module: "subgroup-space", title: "Chabauty ultrametric", run: Some(subgroup::ultrametric) },
    Criterion { id: DETERMINISM, module: "cli", title: "run determinism", run: None },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub module: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CriterionResult {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

fn run_criterion(c: &Criterion, body: impl FnOnce(&mut Checks)) -> CriterionResult {
    let start = Instant::now();
    let mut ck = Checks::default();
    if let Err(p) = catch_unwind(AssertUnwindSafe(|| body(&mut ck))) {
        ck.check("completes without panicking", false, panic_message(&*p));
    }
    let passed = !ck.items.is_empty() && ck.items.iter().all(|c| c.passed);
    CriterionResult {
        id: c.id,
        module: c.module,
        title: c.title,
        passed,
        checks: ck.items,
        timings: ck.timings,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn run_plain(c: &Criterion, fx: &Fixtures) -> CriterionResult {
    let f = c.run.expect("plain criterion");
    run_criterion(c, |ck| f(fx, ck))
}

/// Whether `filter` selects `c`: a criterion id, a module name, or the part of a module
/// name before its first `-`.
fn matches(filter: &str, c: &Criterion) -> bool {
    filter == c.id.to_string() || filter == c.module || c.module.split('-').next() == Some(filter)
}

pub fn selected(filter: Option<&str>) -> Result<Vec<&'static Criterion>> {
    let chosen: Vec<&Criterion> = CRITERIA.iter().filter(|c| filter.map_or(true, |f| matches(f, c))).collect();
    if chosen.is_empty() {
        return Err(CliError::Usage(format!(
            "unknown selftest filter `{}`; expected a criterion number 1-10 or a module name",
            filter.unwrap_or_default()
        )));
    }
    Ok(chosen)
}

fn payload(results: &[CriterionResult]) -> String {
    serde_json::to_string(results).expect("results serialize")
}

/// Runs criteria 1 to 9 twice, reusing `earlier` as the first pass when it already covers
/// all of them, and compares the serialized outcomes.
fn determinism(fx: &Fixtures, earlier: &[CriterionResult], ck: &mut Checks) {
    let plain: Vec<&Criterion> = CRITERIA.iter().filter(|c| c.run.is_some()).collect();
    let first = if earlier.len() == plain.len() {
        earlier.to_vec()
    } else {
        plain.iter().map(|c| run_plain(c, fx)).collect()
    };
    let second: Vec<CriterionResult> = plain.iter().map(|c| run_plain(c, fx)).collect();
    let (a, b) = (payload(&first), payload(&second));
    let differing: Vec<u32> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| payload(std::slice::from_ref(*x)) != payload(std::slice::from_ref(*y)))
        .map(|(x, _)| x.id)
        .collect();
    ck.check(
        "criteria 1-9 reproduce byte for byte",
        a == b,
        format!("{} bytes; differing criteria {differing:?}", a.len()),
    );
}

/// Runs the selected criteria in order.
pub fn selftest(filter: Option<&str>, fx: &Fixtures) -> Result<(RunReport, Vec<CriterionResult>)> {
    let start = Instant::now();
    let chosen = selected(filter)?;
    let mut results: Vec<CriterionResult> = Vec::new();
    for c in chosen {
        let r = if c.id == DETERMINISM {
            let earlier = results.clone();
            run_criterion(c, |ck| determinism(fx, &earlier, ck))
        } else {
            run_plain(c, fx)
        };
        results.push(r);
    }
    let all_passed = results.iter().all(|r| r.passed);
    let mut report = RunReport::new(
        json!({ "command": "selftest", "filter": filter }),
        json!({ "passed": all_passed, "criteria": results }),
    );
    for r in &results {
        report.timings.insert(format!("criterion {}", r.id), r.seconds);
        for (name, secs) in &r.timings {
            report.timings.insert(format!("criterion {}: {name}", r.id), *secs);
        }
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok((report, results))
}

const DETAIL_LIMIT: usize = 160;

fn clip(s: &str) -> String {
    match s.char_indices().nth(DETAIL_LIMIT) {
        Some((i, _)) => format!("{}...", &s[..i]),
        None => s.to_string(),
    }
}

/// One line per criterion, followed by an indented line per failed check.
pub fn format_result(r: &CriterionResult) -> String {
    let mut out = format!(
        "criterion {:>2} [{}] {}: {}",
        r.id,
        r.module,
        r.title,
        if r.passed { "PASS" } else { "FAIL" }
    );
    for c in r.failed_checks() {
        out.push_str(&format!("\n    failed: {} ({})", c.name, clip(&c.detail)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_resolve() {
        let ids = |f: &str| selected(Some(f)).unwrap().iter().map(|c| c.id).collect::<Vec<_>>();
        assert_eq!(ids("spectral"), [1, 2, 3]);
        assert_eq!(ids("convex"), [7, 8]);
        assert_eq!(ids("convex-cone"), [7, 8]);
        assert_eq!(ids("subgroup"), [9]);
        assert_eq!(ids("10"), [10]);
        assert_eq!(selected(None).unwrap().len(), 10);
        assert_eq!(selected(Some("nope")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn data_lines_skip_comments() {
        let lines: Vec<_> = data_lines("# c\n\n a b \n#x\nc").collect();
        assert_eq!(lines, [(3, "a b"), (5, "c")]);
    }

    #[test]
    fn panics_become_failed_checks() {
        let r = run_criterion(&CRITERIA[0], |_| panic!("boom"));
        assert!(!r.passed);
        assert_eq!(r.checks[0].detail, "boom");
    }

    #[test]
    fn a_criterion_without_checks_fails() {
        assert!(!run_criterion(&CRITERIA[0], |_| {}).passed);
    }

    #[test]
    fn long_details_are_clipped() {
        assert!(clip(&"x".repeat(500)).len() < 200);
        assert_eq!(clip("short"), "short");
    }
}
