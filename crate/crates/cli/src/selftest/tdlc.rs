use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use irslab_core::tdlc::{
    folner_certificate_check, folner_search, haar_ratio, haar_ratio_by_index, level_constant_subgroup, CosetUnion,
    FolnerCertificate, FolnerOptions, Portrait, RootedTreeGroup, TruncatedSubgroup, ENUMERATION_CAP, MAX_ARITY,
};
use irslab_core::Rational;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Checks, Fixtures};

/// Every truncation `(d, D)` with `D ≥ 1` and at most `2^15` elements.
fn small_truncations() -> Vec<Arc<RootedTreeGroup>> {
    let mut out = Vec::new();
    for d in 2..=MAX_ARITY {
        for depth in 1.. {
            let Ok(g) = RootedTreeGroup::new(d, depth) else { break };
            if g.order().map_or(true, |o| o > ENUMERATION_CAP as u128) {
                break;
            }
            out.push(Arc::new(g));
        }
    }
    out
}

fn random_union(c: &TruncatedSubgroup, rng: &mut ChaCha8Rng) -> irslab_core::Result<CosetUnion> {
    let level = rng.gen_range(0..=c.group().depth());
    let k = rng.gen_range(1..=4);
    let reps: Vec<Portrait> = (0..k)
        .map(|_| c.dense_selector().choose(rng).expect("nonempty").clone())
        .collect();
    CosetUnion::from_reps(c, level, &reps)
}

/// `|O|` by scanning the ambient group for elements sharing a level prefix with a rep.
fn count_elements(c: &TruncatedSubgroup, o: &CosetUnion) -> usize {
    let k = c.group().prefix_len(o.level());
    let keys: HashSet<&[u8]> = o.reps().iter().map(|r| &r.labels()[..k]).collect();
    c.dense_selector()
        .iter()
        .filter(|x| keys.contains(&x.labels()[..k]))
        .count()
}

pub(super) fn haar_ratios(_: &Fixtures, ck: &mut Checks) {
    let groups = small_truncations();
    let shapes: Vec<String> = groups.iter().map(|g| format!("({},{})", g.arity(), g.depth())).collect();
    ck.check("truncations enumerated", groups.len() == 8, shapes.join(" "));
    let ambient: Result<Vec<TruncatedSubgroup>, _> = groups.iter().map(TruncatedSubgroup::whole).collect();
    let Some(ambient) = ck.ok("truncations enumerate", ambient) else { return };
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut matches, mut cocycle) = (0, 0);
    let mut first_failure = String::new();
    for i in 0..500 {
        let c = ambient.choose(&mut rng).expect("nonempty");
        let unions: Result<Vec<CosetUnion>, _> = (0..3).map(|_| random_union(c, &mut rng)).collect();
        let Some(u) = ck.ok("random coset unions", unions) else { return };
        let (o, l, p) = (&u[0], &u[1], &u[2]);
        let expected = Rational::new(count_elements(c, o).into(), count_elements(c, l).into());
        let (Ok(r), Ok(ri), Ok(rlp), Ok(rop)) = (
            haar_ratio(c, o, l),
            haar_ratio_by_index(c, o, l),
            haar_ratio(c, l, p),
            haar_ratio(c, o, p),
        ) else {
            first_failure = format!("pair {i}: ratio error");
            continue;
        };
        if r == expected && ri == expected {
            matches += 1;
        } else if first_failure.is_empty() {
            first_failure = format!("pair {i}: {r} / {ri} vs {expected}");
        }
        cocycle += (r * rlp == rop) as usize;
    }
    ck.check(
        "haar_ratio equals the element-count ratio",
        matches == 500,
        format!("{matches}/500 {first_failure}"),
    );
    ck.check("cocycle identity", cocycle == 500, format!("{cocycle}/500"));
}

struct Diagonal {
    arity: usize,
    n: u64,
    cases: Vec<(usize, String, Vec<String>)>,
}

fn parse_diagonal(text: &str) -> Result<Diagonal, String> {
    let (mut arity, mut n) = (None, None);
    let mut cases: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (line, content) in super::data_lines(text) {
        let (key, value) = content.split_once(' ').ok_or(format!("line {line}: expected `key value`"))?;
        let bad = || format!("line {line}: bad `{key}`");
        match key {
            "arity" => arity = Some(value.trim().parse().map_err(|_| bad())?),
            "n" => n = Some(value.trim().parse().map_err(|_| bad())?),
            "depth" => cases.push((value.trim().parse().map_err(|_| bad())?, String::new(), Vec::new())),
            "f" => cases.last_mut().ok_or_else(bad)?.1 = value.trim().to_string(),
            "expect" => cases.last_mut().ok_or_else(bad)?.2.push(value.trim().to_string()),
            _ => return Err(format!("line {line}: unknown key `{key}`")),
        }
    }
    match (arity, n) {
        (Some(arity), Some(n)) if !cases.is_empty() => Ok(Diagonal { arity, n, cases }),
        _ => Err("missing `arity`, `n` or `depth`".into()),
    }
}

/// First set of at most 8 singleton cosets, by size then lexicographic combination order,
/// whose boundary ratio `|fU Δ U|/|U|` is at most `1/n`, by element counts.
fn brute_force(c: &TruncatedSubgroup, f: &Portrait, n: u64) -> Option<Vec<Portrait>> {
    let elems = c.dense_selector();
    let g = c.group();
    let bound = Rational::new(1.into(), n.into());
    for size in 1..=8.min(elems.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let u: BTreeSet<&Portrait> = idx.iter().map(|&i| &elems[i]).collect();
            let moved: BTreeSet<Portrait> = u.iter().map(|x| g.mul(f, x)).collect();
            let sym = moved.iter().filter(|x| !u.contains(x)).count() * 2;
            if Rational::new(sym.into(), size.into()) <= bound {
                return Some(idx.iter().map(|&i| elems[i].clone()).collect());
            }
            // advance to the next combination
            let Some(i) = (0..size).rev().find(|&i| idx[i] < elems.len() - size + i) else { break };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

pub(super) fn folner(fx: &Fixtures, ck: &mut Checks) {
    let groups = small_truncations();
    // seeded instances, all of which must produce a certificate that checks
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut passed = 0;
    let mut failures = Vec::new();
    for i in 0..100 {
        let g = groups[..groups.len() - 1].choose(&mut rng).expect("nonempty").clone();
        let gens: Vec<Portrait> = (0..rng.gen_range(1..=2))
            .map(|_| g.standard_generators().choose(&mut rng).expect("generators").clone())
            .collect();
        let Some(c) = ck.ok("ambient subgroup", TruncatedSubgroup::generated_by(&g, &gens)) else { return };
        let q: Vec<Portrait> = (0..rng.gen_range(1..=3))
            .map(|_| c.dense_selector().choose(&mut rng).expect("nonempty").clone())
            .collect();
        let opts = FolnerOptions {
            q_level: rng.gen_range(0..=g.depth()),
            ..FolnerOptions::default()
        };
        let n = rng.gen_range(1..=16);
        match folner_search(&c, &q, n, &opts) {
            Ok(out) => match out.certificate().map(|cert| folner_certificate_check(cert, &c, &q, n)) {
                Some(Ok(true)) => passed += 1,
                Some(Ok(false)) => failures.push(format!("instance {i}: check rejected")),
                Some(Err(e)) => failures.push(format!("instance {i}: {e}")),
                None => failures.push(format!("instance {i}: exhausted")),
            },
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    ck.check(
        "certificates pass the independent check",
        passed == 100,
        format!("{passed}/100 {}", failures.join("; ")),
    );

    let mut zero = 0;
    let mut total = 0;
    for g in &groups {
        let Some(c) = ck.ok("whole truncation", TruncatedSubgroup::whole(g)) else { return };
        for n in 1..=16 {
            total += 1;
            let out = folner_search(&c, &[g.identity()], n, &FolnerOptions::default());
            if let Ok(Some(cert)) = out.as_ref().map(|o| o.certificate()) {
                zero += cert.worst_ratio.is_zero() as usize;
            }
        }
    }
    ck.check("Q = C gives a ratio-0 certificate", zero == total, format!("{zero}/{total}"));

    let Some(diag) = ck.ok("diagonal fixture parses", parse_diagonal(&fx.diagonal)) else { return };
    for (depth, f_text, expected) in &diag.cases {
        let name = format!("diagonal fixture at depth {depth}");
        let Some(g) = ck.ok(&name, RootedTreeGroup::new(diag.arity, *depth)).map(Arc::new) else { continue };
        let Some(c) = ck.ok(&name, level_constant_subgroup(&g)) else { continue };
        let Some(f) = ck.ok(&name, g.parse(f_text)) else { continue };
        let expected: Result<Vec<Portrait>, _> = expected.iter().map(|s| g.parse(s)).collect();
        let Some(expected) = ck.ok(&name, expected) else { continue };
        let opts = FolnerOptions {
            q_level: *depth,
            ..FolnerOptions::default()
        };
        let Some(out) = ck.ok(&name, folner_search(&c, &[f.clone()], diag.n, &opts)) else { continue };
        let Some(cert) = out.certificate().cloned() else {
            ck.check(&name, false, "search exhausted");
            continue;
        };
        let oracle = brute_force(&c, &f, diag.n);
        let format = |reps: &[Portrait]| reps.iter().map(|r| g.format(r)).collect::<Vec<_>>().join(", ");
        ck.check(
            &name,
            oracle.as_deref() == Some(&cert.reps[..]) && cert.reps == expected,
            format!(
                "search [{}], brute force [{}], fixture [{}]",
                format(&cert.reps),
                oracle.as_deref().map(format).unwrap_or_default(),
                format(&expected)
            ),
        );
        let verified = folner_certificate_check(&cert, &c, &[f.clone()], diag.n);
        let tampered = FolnerCertificate {
            reps: cert.reps[1..].to_vec(),
            ..cert.clone()
        };
        let rejected = cert.reps.len() < 2 || folner_certificate_check(&tampered, &c, &[f], diag.n) == Ok(false);
        ck.check(
            &format!("{name}: check accepts and rejects a tampered copy"),
            verified == Ok(true) && rejected,
            format!("{verified:?}"),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_list() {
        let shapes: Vec<(usize, usize)> = small_truncations().iter().map(|g| (g.arity(), g.depth())).collect();
        assert_eq!(shapes, [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (4, 1), (5, 1)]);
    }

    #[test]
    fn diagonal_fixture_shape() {
        let d = parse_diagonal(&Fixtures::bundled().diagonal).unwrap();
        assert_eq!((d.arity, d.n), (2, 2));
        assert_eq!(d.cases.iter().map(|c| c.0).collect::<Vec<_>>(), [3, 4]);
        assert!(parse_diagonal("arity 2\n").is_err());
    }
}
