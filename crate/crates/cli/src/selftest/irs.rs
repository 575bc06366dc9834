use irslab_core::group::{GroupElement, MarkedGroup};
use irslab_core::irs::{conjugacy_class, FinitePmpAction, IrsDistribution};
use irslab_core::subgroup::{enumerate_subgroups, Subgroup};
use irslab_core::Rational;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Checks, Fixtures};
use crate::config::finite_by_name;

/// `(name, order)` rows.
fn parse_groups(text: &str) -> Result<Vec<(String, usize)>, String> {
    super::data_lines(text)
        .map(|(n, line)| match line.split_whitespace().collect::<Vec<_>>()[..] {
            [name, order] => order
                .parse()
                .map(|o| (name.to_string(), o))
                .map_err(|_| format!("line {n}: bad order `{order}`")),
            _ => Err(format!("line {n}: expected `name order`")),
        })
        .collect()
}

/// Positive integer weights on up to three conjugacy classes, uniform within each class.
fn random_invariant(g: &MarkedGroup, subs: &[Subgroup], rng: &mut ChaCha8Rng) -> irslab_core::Result<IrsDistribution> {
    let mut classes: Vec<Vec<Subgroup>> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let h = subs.choose(rng).expect("nonempty");
        if !classes.iter().any(|c| c.contains(h)) {
            classes.push(conjugacy_class(h)?);
        }
    }
    let raw: Vec<usize> = classes.iter().map(|_| rng.gen_range(1..6)).collect();
    let total: usize = raw.iter().sum();
    let mut atoms = Vec::new();
    for (class, w) in classes.iter().zip(&raw) {
        for h in class {
            atoms.push((h.clone(), Rational::new((*w).into(), (total * class.len()).into())));
        }
    }
    IrsDistribution::new(g, atoms)
}

/// The normal closure is the least subgroup containing every atom, and it carries every
/// element of positive inclusion probability.
fn closure_agrees(g: &MarkedGroup, subs: &[Subgroup], mu: &IrsDistribution) -> irslab_core::Result<Result<(), String>> {
    if !mu.check_conjugation_invariance()?.is_certificate() {
        return Ok(Err("invariant measure reported as violating".into()));
    }
    let order = g.order().expect("finite");
    let closure = mu.normal_closure(order)?;
    let mut full = Vec::new();
    for n in subs {
        let mut contains_all = true;
        for (h, _) in mu.atoms() {
            contains_all &= h.is_subgroup_of(n)?;
        }
        if contains_all {
            full.push(n);
        }
    }
    let Some(min) = full.iter().min_by_key(|n| n.order()) else {
        return Ok(Err("no subgroup of full measure".into()));
    };
    if closure != **min {
        return Ok(Err(format!("closure of order {:?}, oracle of order {:?}", closure.order(), min.order())));
    }
    if !closure.is_normal() {
        return Ok(Err("closure is not normal".into()));
    }
    for x in (0..order).map(GroupElement::Index) {
        if !mu.inclusion_probability(&x)?.is_zero() && !closure.contains(&x)? {
            return Ok(Err("an element of positive inclusion probability lies outside".into()));
        }
    }
    Ok(Ok(()))
}

pub(super) fn closures(fx: &Fixtures, ck: &mut Checks) {
    let Some(table) = ck.ok("group fixture parses", parse_groups(&fx.irs_groups)) else { return };
    let mut all: Vec<(MarkedGroup, Vec<Subgroup>)> = Vec::new();
    for (name, order) in &table {
        let check = format!("group {name} has order {order}");
        let Some(g) = finite_by_name(name) else {
            ck.check(&check, false, "unknown group name");
            continue;
        };
        ck.check(&check, g.order() == Some(*order), format!("{:?}", g.order()));
        if let Some(subs) = ck.ok(&format!("subgroups of {name}"), enumerate_subgroups(&g)) {
            all.push((g, subs));
        }
    }
    if all.is_empty() {
        return;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut agreed = 0;
    let mut failures = Vec::new();
    for i in 0..200 {
        let (g, subs) = all.choose(&mut rng).expect("nonempty");
        let outcome = random_invariant(g, subs, &mut rng).and_then(|mu| closure_agrees(g, subs, &mu));
        match outcome {
            Ok(Ok(())) => agreed += 1,
            Ok(Err(why)) => failures.push(format!("measure {i}: {why}")),
            Err(e) => failures.push(format!("measure {i}: {e}")),
        }
    }
    ck.check(
        "normal closure equals the least full-measure subgroup",
        agreed == 200,
        format!("{agreed}/200 {}", failures.join("; ")),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let small: Vec<&(MarkedGroup, Vec<Subgroup>)> = all.iter().filter(|(g, _)| g.order() <= Some(24)).collect();
    let (mut done, mut invariant) = (0, 0);
    let mut failures = Vec::new();
    while done < 500 {
        let (g, subs) = small.choose(&mut rng).expect("nonempty");
        let order = g.order().expect("finite");
        let mut orbits = Vec::new();
        let mut points = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let h = subs.choose(&mut rng).expect("nonempty");
            let index = order / h.order().expect("finite");
            if points + index <= 12 {
                points += index;
                orbits.push(h.clone());
            }
        }
        if orbits.is_empty() {
            continue;
        }
        let raw: Vec<usize> = orbits.iter().map(|_| rng.gen_range(1..5)).collect();
        let total: usize = raw.iter().sum();
        let weighted: Vec<(Subgroup, Rational)> = orbits
            .into_iter()
            .zip(raw)
            .map(|(h, w)| (h, Rational::new(w.into(), total.into())))
            .collect();
        let verdict = FinitePmpAction::on_cosets(g, &weighted)
            .and_then(|a| a.stabilizer_pushforward())
            .and_then(|mu| mu.check_conjugation_invariance());
        match verdict {
            Ok(v) if v.is_certificate() => invariant += 1,
            Ok(_) => failures.push(format!("action {done}: violation")),
            Err(e) => failures.push(format!("action {done}: {e}")),
        }
        done += 1;
    }
    ck.check(
        "stabilizer pushforwards of coset actions are invariant",
        invariant == 500,
        format!("{invariant}/500 {}", failures.join("; ")),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_fixture_parses() {
        let rows = parse_groups(&Fixtures::bundled().irs_groups).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(parse_groups("S3 six").is_err());
    }
}
