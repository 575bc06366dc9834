use irslab_core::convex::fixtures::{
    klein_reflections, random_body, random_measure, random_point, random_sub_body, signed_permutations,
};
use irslab_core::convex::{
    apply_action, barycenter, extreme_point_check, fix_set, invariant_measure_test, minkowski_sum, BodyMeasure,
    ConvexBody, DirectionSet, MeasureVerdict, OrthogonalAction, Point,
};
use irslab_core::group::GroupElement;
use irslab_core::irs::{conjugacy_class, IrsDistribution};
use irslab_core::rational::ratio;
use irslab_core::subgroup::{enumerate_subgroups, Subgroup};
use irslab_core::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Checks, Fixtures};

/// Tallies a sweep: `Ok(true)` passes, anything else is kept as a failure note.
struct Sweep {
    total: usize,
    passed: usize,
    notes: Vec<String>,
}

impl Sweep {
    fn new() -> Self {
        Sweep {
            total: 0,
            passed: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, outcome: Result<bool>) {
        match outcome {
            Ok(true) => self.passed += 1,
            Ok(false) if self.notes.len() < 3 => self.notes.push(format!("instance {} fails", self.total)),
            Err(e) if self.notes.len() < 3 => self.notes.push(format!("instance {}: {e}", self.total)),
            _ => {}
        }
        self.total += 1;
    }

    fn finish(self, ck: &mut Checks, name: &str) {
        let detail = format!("{}/{} {}", self.passed, self.total, self.notes.join("; "));
        ck.check(name, self.total > 0 && self.passed == self.total, detail);
    }
}

fn additivity(rng: &mut ChaCha8Rng, dim: usize) -> Result<bool> {
    let dirs = DirectionSet::default_for(dim)?;
    let a = random_body(dim, rng);
    let b = random_body(dim, rng);
    let l = rng.gen_range(0..=4);
    let m = rng.gen_range(0..=4 - l);
    let (lambda, mu) = (ratio(l, 4), ratio(m, 4));
    let s = minkowski_sum(&a, &b, &lambda, &mu)?;
    for d in dirs.directions() {
        if s.support(d)?.0 != &lambda * a.support(d)?.0 + &mu * b.support(d)?.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn equivariant_barycenter(act: &OrthogonalAction, rng: &mut ChaCha8Rng) -> Result<bool> {
    let c = random_body(act.dim(), rng);
    let nu = random_measure(&c, rng);
    let g = act.matrices().choose(rng).expect("nonempty");
    let moved = act.translate_measure(g, &nu)?;
    Ok(barycenter(&moved)? == apply_action(g, &barycenter(&nu)?)?)
}

fn random_subgroup(act: &OrthogonalAction, rng: &mut ChaCha8Rng) -> Result<Subgroup> {
    let g = act.group();
    let order = g.order().expect("finite");
    let gens: Vec<GroupElement> = (0..rng.gen_range(0..=2))
        .map(|_| GroupElement::Index(rng.gen_range(0..order)))
        .collect();
    Subgroup::generated_by(g, &gens)
}

/// `g·Fix_C(H) = Fix_{gC}(gHg⁻¹)`, and a larger subgroup fixes a smaller set.
fn fix_equivariant_antitone(act: &OrthogonalAction, rng: &mut ChaCha8Rng) -> Result<bool> {
    let c = random_body(act.dim(), rng);
    let h = random_subgroup(act, rng)?;
    let x = rng.gen_range(0..act.group().order().expect("finite"));
    let g = act.matrix(x);
    let fixed = act.fix_subgroup(&h, &c)?;
    let conj = h.conjugate(&GroupElement::Index(x))?;
    let rhs = fix_set(&act.subgroup_matrices(&conj)?, &apply_action(g, &c)?)?;
    let lhs = fixed.as_ref().map(|f| apply_action(g, f)).transpose()?;
    if lhs != rhs {
        return Ok(false);
    }
    let bigger = h.join(&random_subgroup(act, rng)?)?;
    Ok(match (act.fix_subgroup(&bigger, &c)?, fixed) {
        (Some(s), Some(f)) => s.is_subset_of(&f)?,
        (Some(_), None) => false,
        _ => true,
    })
}

fn verdict_sweep(rng: &mut ChaCha8Rng, dim: usize) -> Result<bool> {
    let dirs = DirectionSet::default_for(dim)?;
    let c = random_body(dim, rng);
    let nu = random_measure(&c, rng);
    let verdict = invariant_measure_test(&nu, &c, &dirs)?;
    Ok(verdict != MeasureVerdict::Violated && (!nu.is_dirac_at(&c) || verdict == MeasureVerdict::Consistent))
}

pub(super) fn operations(fx: &Fixtures, ck: &mut Checks) {
    let actions = [signed_permutations(2), signed_permutations(3)];

    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut sweep = Sweep::new();
    for i in 0..500 {
        sweep.record(additivity(&mut rng, 2 + i % 2));
    }
    sweep.finish(ck, "support of a Minkowski combination is the combination of supports");

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut sweep = Sweep::new();
    for i in 0..500 {
        sweep.record(equivariant_barycenter(&actions[i % 2], &mut rng));
    }
    sweep.finish(ck, "barycenter is equivariant");

    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut sweep = Sweep::new();
    for i in 0..500 {
        sweep.record(fix_equivariant_antitone(&actions[i % 2], &mut rng));
    }
    sweep.finish(ck, "fixed sets are equivariant and antitone");

    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut sweep = Sweep::new();
    let mut equal_midpoints = 0;
    for i in 0..500 {
        let dim = 2 + i % 2;
        let c = random_body(dim, &mut rng);
        let pick = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.4) { c.clone() } else { random_sub_body(&c, rng) };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let r = extreme_point_check(&c, &a, &b);
        if let Ok(r) = &r {
            equal_midpoints += r.midpoint_equals as usize;
        }
        sweep.record(r.map(|r| r.implication_holds()));
    }
    sweep.finish(ck, "an extreme midpoint forces both endpoints");
    ck.check(
        "more than 50 instances with equal midpoints",
        equal_midpoints > 50,
        format!("{equal_midpoints}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut sweep = Sweep::new();
    for i in 0..300 {
        sweep.record(verdict_sweep(&mut rng, 2 + i % 2));
    }
    sweep.finish(ck, "the measure test never reports a violation");

    let segments = BodyMeasure::from_text(&fx.minkowski_segments);
    let square = ConvexBody::from_text(&fx.minkowski_square);
    if let (Some(nu), Some(square)) = (
        ck.ok("segment measure fixture parses", segments),
        ck.ok("square fixture parses", square),
    ) {
        let bary = barycenter(&nu);
        ck.check(
            "barycenter of the two segments is the square",
            bary.as_ref() == Ok(&square),
            bary.map(|b| b.to_text()).unwrap_or_else(|e| e.to_string()),
        );
    }
}

/// Orbit hull of random seeds, so the body is fixed by the whole group.
fn symmetric_body(act: &OrthogonalAction, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    let seeds: Vec<Point> = (0..rng.gen_range(1..=2)).map(|_| random_point(act.dim(), rng)).collect();
    let orbit: Vec<Point> = act
        .matrices()
        .iter()
        .flat_map(|m| seeds.iter().map(|p| m.apply(p)))
        .collect();
    ConvexBody::new(act.dim(), orbit)
}

fn pipeline(act: &OrthogonalAction, subs: &[Subgroup], rng: &mut ChaCha8Rng) -> Result<bool> {
    let c = symmetric_body(act, rng)?;
    if !act.is_fixed_body(&c)? {
        return Ok(false);
    }
    let h = subs.choose(rng).expect("nonempty");
    let mu = IrsDistribution::uniform(act.group(), conjugacy_class(h)?)?;
    let nu = match act.pushforward_fix(&mu, &c) {
        Err(Error::EmptySet) => return act.fix_equivariant(h, &c),
        other => other?,
    };
    Ok(act.is_invariant_measure(&nu)? && act.is_fixed_body(&barycenter(&nu)?)? && act.fix_equivariant(h, &c)?)
}

pub(super) fn klein(fx: &Fixtures, ck: &mut Checks) {
    let act = klein_reflections();
    let square = ck.ok("square fixture parses", ConvexBody::from_text(&fx.klein_square));
    let mu = ck.ok("IRS fixture parses", IrsDistribution::from_text(act.group(), &fx.klein_irs));
    let expected = ck.ok("barycenter fixture parses", ConvexBody::from_text(&fx.klein_barycenter));
    if let (Some(square), Some(mu), Some(expected)) = (square, mu, expected) {
        let inv = mu.check_conjugation_invariance().map(|v| v.is_certificate());
        ck.check("IRS is conjugation invariant", inv == Ok(true), format!("{inv:?}"));
        let fixed = act.is_fixed_body(&square);
        ck.check("square is fixed by the group", fixed == Ok(true), format!("{fixed:?}"));
        if let Some(nu) = ck.ok("pushforward", act.pushforward_fix(&mu, &square)) {
            let inv = act.is_invariant_measure(&nu);
            ck.check("pushforward measure is invariant", inv == Ok(true), format!("{inv:?}"));
            if let Some(bary) = ck.ok("barycenter", barycenter(&nu)) {
                let fixed = act.is_fixed_body(&bary);
                ck.check("barycenter is fixed by the group", fixed == Ok(true), format!("{fixed:?}"));
                ck.check("barycenter matches the fixture", bary == expected, bary.to_text());
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let mut sweep = Sweep::new();
    for act in [klein_reflections(), signed_permutations(2), signed_permutations(3)] {
        let Some(subs) = ck.ok("subgroup enumeration", enumerate_subgroups(act.group())) else { return };
        for _ in 0..10 {
            sweep.record(pipeline(&act, &subs, &mut rng));
        }
    }
    sweep.finish(ck, "invariant IRS on symmetric bodies give fixed barycenters");
}
